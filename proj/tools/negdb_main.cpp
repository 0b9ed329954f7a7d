#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "negdb/bench.hpp"
#include "negdb/crypto.hpp"
#include "negdb/error.hpp"
#include "negdb/store.hpp"

namespace {

struct CommonOpts {
  std::string db = "negdb.db";
  std::string keyfile = "negdb.key";
  std::size_t cache_capacity = 1024;
  std::string variant = "separator";
  std::size_t digest_start = 13;
  std::size_t digest_width = 8;
};

void add_db_option(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--db", opts.db, "table file path")->capture_default_str();
}

void add_keyfile_option(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--keyfile", opts.keyfile, "key file path")->capture_default_str();
}

void add_pipeline_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--cache-capacity", opts.cache_capacity, "LRU cache entry limit")
      ->capture_default_str();
  cmd->add_option("--codec-variant", opts.variant, "per-character encoding")
      ->check(CLI::IsMember({"separator", "mul10"}))
      ->capture_default_str();
  cmd->add_option("--digest-start", opts.digest_start, "digest window offset")
      ->check(CLI::Range(0, 31))
      ->capture_default_str();
  cmd->add_option("--digest-width", opts.digest_width, "digest window width")
      ->check(CLI::Range(1, 32))
      ->capture_default_str();
}

negdb::StoreConfig store_config(const CommonOpts& opts) {
  negdb::StoreConfig cfg;
  cfg.cache_capacity = opts.cache_capacity;
  cfg.pipeline.variant = opts.variant == "mul10" ? negdb::CodecVariant::kMul10
                                                 : negdb::CodecVariant::kSeparator;
  cfg.pipeline.digest_start = opts.digest_start;
  cfg.pipeline.digest_width = opts.digest_width;
  return cfg;
}

negdb::RsaPublicKey load_public_key(const CommonOpts& opts) {
  return negdb::load_keyfile(opts.keyfile).pub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"negdb: negative-tuple credential store"};
  app.require_subcommand(1);

  CommonOpts opts;
  int rc = 0;

  // init
  auto* init_cmd = app.add_subcommand("init", "create an empty table and a key pair");
  unsigned bits = 512;
  std::optional<unsigned long> seed;
  add_db_option(init_cmd, opts);
  add_keyfile_option(init_cmd, opts);
  init_cmd->add_option("--bits", bits, "RSA modulus size")->capture_default_str();
  init_cmd->add_option("--seed", seed, "deterministic key generation seed");
  init_cmd->callback([&] {
    negdb::TableStore::create_file(opts.db);
    negdb::save_keypair(opts.keyfile, negdb::generate_keypair(bits, seed));
  });

  // insert
  auto* insert_cmd = app.add_subcommand("insert", "store one record's secret");
  std::string name, secret;
  std::size_t chaff = 0;
  insert_cmd->add_option("name", name, "public record name")->required();
  insert_cmd->add_option("secret", secret, "sensitive value")->required();
  insert_cmd->add_option("--chaff", chaff, "decoy rows to interleave")->capture_default_str();
  add_db_option(insert_cmd, opts);
  add_keyfile_option(insert_cmd, opts);
  add_pipeline_options(insert_cmd, opts);
  insert_cmd->callback([&] {
    negdb::TableStore store(opts.db, store_config(opts));
    negdb::TimestampKey key = store.insert(name, secret, load_public_key(opts), chaff);
    std::cout << key.rendered << '\n';
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a candidate secret");
  verify_cmd->add_option("name", name, "public record name")->required();
  verify_cmd->add_option("secret", secret, "candidate value")->required();
  add_db_option(verify_cmd, opts);
  add_keyfile_option(verify_cmd, opts);
  add_pipeline_options(verify_cmd, opts);
  verify_cmd->callback([&] {
    negdb::TableStore store(opts.db, store_config(opts));
    rc = store.verify(name, secret, load_public_key(opts)) ? 0 : 1;
  });

  // raw
  auto* raw_cmd = app.add_subcommand("raw", "substring scan, printed as stored");
  std::string needle;
  raw_cmd->add_option("substring", needle, "text to look for (empty matches all)");
  add_db_option(raw_cmd, opts);
  raw_cmd->callback([&] {
    negdb::TableStore store(opts.db, store_config(opts));
    for (const auto& [row_name, value] : store.raw_query(needle)) {
      std::cout << row_name << '\t' << value << '\n';
    }
  });

  // dump
  auto* dump_cmd = app.add_subcommand("dump", "print every row with its ordinal");
  add_db_option(dump_cmd, opts);
  dump_cmd->callback([&] {
    negdb::TableStore store(opts.db, store_config(opts));
    for (const negdb::NegativeTuple& t : store.rows()) {
      std::cout << t.record_name << '\t' << t.ordinal << '\t' << t.stored_value() << '\n';
    }
  });

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "cache counters of this process");
  add_db_option(stats_cmd, opts);
  stats_cmd->add_option("--cache-capacity", opts.cache_capacity, "LRU cache entry limit")
      ->capture_default_str();
  stats_cmd->callback([&] {
    negdb::TableStore store(opts.db, store_config(opts));
    negdb::CacheStats s = store.cache_stats();
    std::cout << "hits=" << s.hits << " misses=" << s.misses
              << " evictions=" << s.evictions << '\n';
  });

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "encode timing per secret length, as CSV");
  std::size_t max_len = 64;
  bench_cmd->add_option("--max-len", max_len, "largest secret length")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
  add_db_option(bench_cmd, opts);
  add_keyfile_option(bench_cmd, opts);
  add_pipeline_options(bench_cmd, opts);
  bench_cmd->callback([&] {
    negdb::TableStore store(opts.db, store_config(opts));
    // Median of an odd sample count; comfortably above the 100-rep floor.
    auto rows = negdb::run_encode_bench(store, load_public_key(opts), max_len, 101);
    negdb::write_bench_csv(std::cout, rows);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const negdb::Error& e) {
    std::cerr << "negdb: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "negdb: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
