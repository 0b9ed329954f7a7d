#include "negdb/crypto.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "negdb/error.hpp"

namespace negdb {

namespace {

constexpr char kHexChars[] = "0123456789abcdef";

class GmpRandom {
 public:
  explicit GmpRandom(unsigned long seed) {
    gmp_randinit_mt(state_);
    gmp_randseed_ui(state_, seed);
  }
  ~GmpRandom() { gmp_randclear(state_); }
  GmpRandom(const GmpRandom&) = delete;
  GmpRandom& operator=(const GmpRandom&) = delete;

  gmp_randstate_t& state() { return state_; }

 private:
  gmp_randstate_t state_;
};

mpz_class random_prime(unsigned bits, gmp_randstate_t& state) {
  mpz_class start;
  mpz_urandomb(start.get_mpz_t(), state, bits);
  mpz_setbit(start.get_mpz_t(), bits - 1);
  mpz_class prime;
  mpz_nextprime(prime.get_mpz_t(), start.get_mpz_t());
  return prime;
}

bool coprime(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g == 1;
}

std::size_t bit_length(const mpz_class& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

mpz_class from_bytes_be(const std::uint8_t* data, std::size_t size) {
  mpz_class v;
  mpz_import(v.get_mpz_t(), size, 1, 1, 0, 0, data);
  return v;
}

void append_bytes_be(Bytes& out, const mpz_class& v, std::size_t width) {
  std::size_t need = v == 0 ? 0 : (bit_length(v) + 7) / 8;
  if (need > width) {
    throw Error(ErrorCode::Internal, "integer wider than its export slot");
  }
  std::size_t base = out.size();
  out.resize(base + width, 0);
  if (need > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + base + (width - need), &written, 1, 1, 0, 0, v.get_mpz_t());
  }
}

struct BlockLayout {
  std::size_t frame;    // bytes per plaintext frame, read as one integer < n
  std::size_t payload;  // data bytes per frame (frame minus the length byte)
  std::size_t cipher;   // bytes per ciphertext block
};

BlockLayout layout_for(const mpz_class& n) {
  std::size_t bits = bit_length(n);
  std::size_t frame = (bits - 1) / 8;
  if (frame < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "modulus too small to frame byte blocks (needs 17+ bits)");
  }
  // The in-frame length prefix is one byte, so cap the payload at 255.
  return {frame, std::min<std::size_t>(frame - 1, 255), (bits + 7) / 8};
}

}  // namespace

RsaKeyPair generate_keypair(unsigned bits, std::optional<unsigned long> seed) {
  if (bits < 16) {
    throw Error(ErrorCode::InvalidArgument, "key size must be at least 16 bits");
  }
  unsigned long actual_seed;
  if (seed) {
    actual_seed = *seed;
  } else {
    std::random_device rd;
    actual_seed = (static_cast<unsigned long>(rd()) << 32) ^ rd();
  }
  GmpRandom rng(actual_seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    mpz_class p = random_prime(bits / 2, rng.state());
    mpz_class q = random_prime(bits - bits / 2, rng.state());
    if (p == q) continue;
    mpz_class n = p * q;
    mpz_class lambda;
    {
      mpz_class p1 = p - 1, q1 = q - 1;
      mpz_lcm(lambda.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());
    }
    mpz_class e = 65537;
    if (!(e < n && coprime(e, lambda))) {
      for (e = 3; e < n && !coprime(e, lambda); e += 2) {
      }
      if (e >= n) continue;
    }
    mpz_class d;
    if (mpz_invert(d.get_mpz_t(), e.get_mpz_t(), lambda.get_mpz_t()) == 0) continue;
    return {RsaPublicKey{n, e}, RsaPrivateKey{n, d}};
  }
  throw Error(ErrorCode::KeyGenFailure, "no admissible public exponent found");
}

mpz_class rsa_apply(const mpz_class& value, const mpz_class& modulus,
                    const mpz_class& exponent) {
  if (value < 0 || value >= modulus) {
    throw Error(ErrorCode::InvalidArgument, "block value outside [0, n)");
  }
  mpz_class result;
  mpz_powm(result.get_mpz_t(), value.get_mpz_t(), exponent.get_mpz_t(),
           modulus.get_mpz_t());
  return result;
}

Bytes rsa_encrypt(const Bytes& plain, const RsaPublicKey& key) {
  if (plain.empty()) {
    throw Error(ErrorCode::EmptyInput, "nothing to encrypt");
  }
  BlockLayout lay = layout_for(key.n);
  Bytes out;
  out.reserve(((plain.size() + lay.payload - 1) / lay.payload) * lay.cipher);
  std::vector<std::uint8_t> frame(lay.frame);
  for (std::size_t off = 0; off < plain.size(); off += lay.payload) {
    std::size_t len = std::min(lay.payload, plain.size() - off);
    std::fill(frame.begin(), frame.end(), 0);
    frame[0] = static_cast<std::uint8_t>(len);
    std::copy(plain.begin() + off, plain.begin() + off + len, frame.begin() + 1);
    mpz_class m = from_bytes_be(frame.data(), frame.size());
    append_bytes_be(out, rsa_apply(m, key.n, key.e), lay.cipher);
  }
  return out;
}

Bytes rsa_decrypt(const Bytes& cipher, const RsaPrivateKey& key) {
  if (cipher.empty()) {
    throw Error(ErrorCode::EmptyInput, "nothing to decrypt");
  }
  BlockLayout lay = layout_for(key.n);
  if (cipher.size() % lay.cipher != 0) {
    throw Error(ErrorCode::InvalidArgument, "ciphertext length not block aligned");
  }
  Bytes plain;
  Bytes frame;
  for (std::size_t off = 0; off < cipher.size(); off += lay.cipher) {
    mpz_class c = from_bytes_be(cipher.data() + off, lay.cipher);
    if (c >= key.n) {
      throw Error(ErrorCode::InvalidArgument, "ciphertext block outside [0, n)");
    }
    frame.clear();
    append_bytes_be(frame, rsa_apply(c, key.n, key.d), lay.frame);
    std::size_t len = frame[0];
    if (len == 0 || len > lay.payload) {
      throw Error(ErrorCode::InvalidArgument, "bad length prefix in decrypted block");
    }
    plain.insert(plain.end(), frame.begin() + 1, frame.begin() + 1 + len);
  }
  return plain;
}

std::string hex_from_bytes(const Bytes& data) {
  if (data.empty()) {
    throw Error(ErrorCode::EmptyInput, "no bytes to render");
  }
  std::string hex;
  hex.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    hex.push_back(kHexChars[b >> 4]);
    hex.push_back(kHexChars[b & 0x0F]);
  }
  return hex;
}

std::string md5_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  const void* ptr = data.empty() ? static_cast<const void*>("") : data.data();
  if (EVP_Digest(ptr, data.size(), digest, &len, EVP_md5(), nullptr) != 1 || len != 16) {
    throw Error(ErrorCode::Internal, "MD5 backend failure");
  }
  std::string hex;
  hex.reserve(32);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHexChars[digest[i] >> 4]);
    hex.push_back(kHexChars[digest[i] & 0x0F]);
  }
  return hex;
}

std::string digest_truncate(std::string_view hex, std::size_t start, std::size_t width) {
  if (hex.empty()) {
    throw Error(ErrorCode::EmptyInput, "no hex text to digest");
  }
  if (width == 0 || start + width > 32) {
    throw Error(ErrorCode::InvalidArgument, "digest window must fit within 32 characters");
  }
  return md5_hex(hex).substr(start, width);
}

std::string encode_secret(std::string_view text, const TimestampKey& key,
                          const RsaPublicKey& pub, const PipelineOptions& opts) {
  std::string staged = virtual_encrypt(text, key, opts.variant);
  Bytes bytes(staged.begin(), staged.end());
  return digest_truncate(hex_from_bytes(rsa_encrypt(bytes, pub)), opts.digest_start,
                         opts.digest_width);
}

void save_keypair(const std::filesystem::path& path, const RsaKeyPair& keypair) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::StorageFailure, "cannot open key file for writing: " + path.string());
  }
  out << keypair.pub.n.get_str() << '\n'
      << keypair.pub.e.get_str() << '\n'
      << keypair.priv.d.get_str() << '\n';
  out.flush();
  if (!out) {
    throw Error(ErrorCode::StorageFailure, "failed writing key file: " + path.string());
  }
}

LoadedKey load_keyfile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::StorageFailure, "cannot open key file: " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() && lines.size() >= 2) break;  // tolerate a trailing blank line
    lines.push_back(line);
  }
  if (lines.size() < 2 || lines.size() > 3) {
    throw Error(ErrorCode::InvalidArgument,
                "key file must hold 2 or 3 decimal integers, one per line");
  }
  auto parse = [&](const std::string& text, const char* what) {
    mpz_class v;
    if (text.empty() || v.set_str(text, 10) != 0 || v < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("key file ") + what + " is not a decimal integer");
    }
    return v;
  };
  LoadedKey key;
  key.pub.n = parse(lines[0], "modulus");
  key.pub.e = parse(lines[1], "exponent");
  if (key.pub.n < 4 || key.pub.e <= 1 || key.pub.e >= key.pub.n) {
    throw Error(ErrorCode::InvalidArgument, "key file violates 4 <= n, 1 < e < n");
  }
  if (lines.size() == 3) {
    mpz_class d = parse(lines[2], "private exponent");
    key.priv = RsaPrivateKey{key.pub.n, d};
  }
  return key;
}

}  // namespace negdb
