#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "negdb/codec.hpp"

namespace negdb {

using Bytes = std::vector<std::uint8_t>;

struct RsaPublicKey {
  mpz_class n;
  mpz_class e;
  bool operator==(const RsaPublicKey&) const = default;
};

struct RsaPrivateKey {
  mpz_class n;
  mpz_class d;
  bool operator==(const RsaPrivateKey&) const = default;
};

struct RsaKeyPair {
  RsaPublicKey pub;
  RsaPrivateKey priv;
};

// Knobs the pipeline leaves open: which per-character encoding runs first and
// which window of the 32-character digest becomes the stored value.
struct PipelineOptions {
  CodecVariant variant = CodecVariant::kSeparator;
  std::size_t digest_start = 13;
  std::size_t digest_width = 8;
};

// Deterministic when a seed is given. bits >= 16; tiny keys are only good for
// block-level experiments, the byte pipeline needs a modulus of 17+ bits.
RsaKeyPair generate_keypair(unsigned bits,
                            std::optional<unsigned long> seed = std::nullopt);

// value^exponent mod modulus, value must be in [0, modulus).
mpz_class rsa_apply(const mpz_class& value, const mpz_class& modulus,
                    const mpz_class& exponent);

// Textbook unpadded RSA over length-prefixed fixed-size blocks. Deterministic
// by construction; verification depends on that.
Bytes rsa_encrypt(const Bytes& plain, const RsaPublicKey& key);
Bytes rsa_decrypt(const Bytes& cipher, const RsaPrivateKey& key);

std::string hex_from_bytes(const Bytes& data);

// Full 32-character lowercase MD5 of the given bytes.
std::string md5_hex(std::string_view data);

// MD5 the hex text, keep `width` characters starting at `start`.
std::string digest_truncate(std::string_view hex, std::size_t start = 13,
                            std::size_t width = 8);

// The whole pipeline: codec -> RSA -> hex -> truncated digest. Pure function
// of its arguments.
std::string encode_secret(std::string_view text, const TimestampKey& key,
                          const RsaPublicKey& pub, const PipelineOptions& opts = {});

// Key file holds decimal n, e and optionally d, one per line.
struct LoadedKey {
  RsaPublicKey pub;
  std::optional<RsaPrivateKey> priv;
};

void save_keypair(const std::filesystem::path& path, const RsaKeyPair& keypair);
LoadedKey load_keyfile(const std::filesystem::path& path);

}  // namespace negdb
