#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <memory>

#include <openssl/evp.h>

#include "negdim/errors.hpp"
#include "negdim/text_io.hpp"

namespace negdim::cli {

std::string sha256_file(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
    throw std::runtime_error("SHA-256 failed for " + path.string());
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "negdim";
  j["version"] = NEGDIM_VERSION;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& p : inputs) j["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& p : outputs) j["outputs"].push_back(p.string());
  return j.dump(2) + "\n";
}

void write_with_manifest(const std::filesystem::path& path, const std::string& content,
                         const RunManifest& manifest) {
  write_file_atomic(path, content);
  write_file_atomic(path.string() + ".manifest.json", manifest.to_json());
}

}  // namespace negdim::cli
