#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "negdb/crypto.hpp"
#include "negdb/store.hpp"

namespace negdb {

struct BenchRow {
  std::size_t len = 0;         // secret length
  std::uint64_t encode_ns = 0; // median wall time of one encode
  std::size_t rows = 0;        // genuine rows the insert produced
};

// For each secret length 1..max_len: time encode_secret (median of `reps`
// samples) and insert one record to count the rows it lands as.
std::vector<BenchRow> run_encode_bench(TableStore& store, const RsaPublicKey& pub,
                                       std::size_t max_len, std::size_t reps);

// CSV with the fixed header "len,encode_ns,rows".
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace negdb
