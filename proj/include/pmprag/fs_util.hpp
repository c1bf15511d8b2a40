#pragma once

#include "pmprag/digest.hpp"
#include "pmprag/error.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>

namespace pmprag {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::InvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a sibling temp file and renames, so readers never see a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000) + "." +
         std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::StoreWrite, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(Errc::StoreWrite, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(Errc::StoreWrite, "cannot rename into " + path.string());
  }
}

/// Maps an arbitrary key to a portable file name: separators, '%', shell
/// metacharacters and control bytes are percent-encoded.
inline std::string file_name_for_key(std::string_view key) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    const auto c = static_cast<unsigned char>(key[i]);
    const bool reserved = c < 0x20 || c == 0x7F || c == '/' || c == '\\' || c == '%' || c == ':' ||
                          c == '*' || c == '?' || c == '"' || c == '<' || c == '>' || c == '|' ||
                          (i == 0 && c == '.');
    if (reserved) {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  if (out.empty()) return "%";
  // Long keys keep a readable prefix plus a digest of the full key.
  if (out.size() > 160) out = out.substr(0, 120) + "~" + sha256_hex(key).substr(0, 24);
  return out;
}

} // namespace pmprag
