#include "negdb/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "negdb/error.hpp"

namespace negdb {

namespace {

std::uint64_t median_ns(std::vector<std::uint64_t>& samples) {
  auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
  std::nth_element(samples.begin(), mid, samples.end());
  return *mid;
}

}  // namespace

std::vector<BenchRow> run_encode_bench(TableStore& store, const RsaPublicKey& pub,
                                       std::size_t max_len, std::size_t reps) {
  if (max_len == 0 || reps == 0) {
    throw Error(ErrorCode::InvalidArgument, "bench needs max_len >= 1 and reps >= 1");
  }
  using clock = std::chrono::steady_clock;
  std::mt19937_64 secret_rng(0x6e656764625f31ULL);  // fixed: same workload every run
  std::random_device rd;
  std::uniform_int_distribution<int> printable(33, 126);
  std::uniform_int_distribution<unsigned> suffix(0, 0xFFFFFFFFu);

  TimestampKey key = make_timestamp(store.clock_now());
  const PipelineOptions& opts = store.pipeline();

  std::vector<BenchRow> table;
  table.reserve(max_len);
  std::size_t sink = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::string secret(len, ' ');
    for (char& c : secret) c = static_cast<char>(printable(secret_rng));

    std::vector<std::uint64_t> samples(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      auto t0 = clock::now();
      sink += encode_secret(secret, key, pub, opts).size();
      auto t1 = clock::now();
      samples[r] = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }

    std::string name = "bench-" + std::to_string(len) + "-" + std::to_string(suffix(rd));
    std::size_t before = store.row_count();
    store.insert(name, secret, pub, 0);
    table.push_back(BenchRow{len, median_ns(samples), store.row_count() - before});
  }
  if (sink == 0) {
    throw Error(ErrorCode::Internal, "encode produced no output");
  }
  return table;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "len,encode_ns,rows\n";
  for (const BenchRow& row : rows) {
    out << row.len << ',' << row.encode_ns << ',' << row.rows << '\n';
  }
}

}  // namespace negdb
