#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "heatcount/cli.hpp"
#include "heatcount/errors.hpp"

namespace heatcount::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for hashing");
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 initialisation failed");
  }
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);

  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    char pair[3];
    std::snprintf(pair, sizeof pair, "%02x", digest[i]);
    hex += pair;
  }
  return hex;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json input_list = nlohmann::json::array();
  for (const auto& path : inputs) {
    input_list.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
  }
  nlohmann::json output_list = nlohmann::json::array();
  for (const auto& path : outputs) {
    output_list.push_back(path.string());
  }
  return {{"command", command},   {"argv", argv},
          {"params", params},     {"inputs", std::move(input_list)},
          {"outputs", std::move(output_list)}, {"version", version},
          {"duration_s", duration_s}};
}

void RunManifest::write(const std::filesystem::path& path) const {
  for (const auto& output : outputs) {
    if (!std::filesystem::exists(output)) {
      throw IoError("manifest lists '" + output.string() + "' but it was not written");
    }
  }
  const auto doc = to_json();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

}  // namespace heatcount::cli
