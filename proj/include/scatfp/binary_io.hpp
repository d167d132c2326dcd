#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>

namespace scatfp::binio {

// Little-endian primitive encoding shared by the model and feature files.

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);
  void magic(std::string_view tag);
  void u32(std::uint32_t v);
  void i32(std::int32_t v);
  void f64(double v);
  void f64s(std::span<const double> v);
  /// Flushes and throws IoError on any write failure.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);
  /// Throws ValidationError if the next four bytes are not `tag`.
  void expect_magic(std::string_view tag);
  std::uint32_t u32();
  std::int32_t i32();
  double f64();
  void f64s(std::span<double> out);
  bool at_end();

 private:
  void read(char* dst, std::size_t n);
  std::filesystem::path path_;
  std::ifstream in_;
};

}  // namespace scatfp::binio
