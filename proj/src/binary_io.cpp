#include "scatfp/binary_io.hpp"

#include <array>
#include <bit>

#include "scatfp/errors.hpp"

namespace scatfp::binio {

namespace {

template <class U>
void put_le(std::ofstream& out, U v) {
  std::array<char, sizeof(U)> buf;
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf.data(), buf.size());
}

template <class U>
U get_le(const std::array<unsigned char, sizeof(U)>& buf) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

Writer::Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw IoError("cannot open for writing: " + path.string());
}

void Writer::magic(std::string_view tag) { out_.write(tag.data(), static_cast<std::streamsize>(tag.size())); }
void Writer::u32(std::uint32_t v) { put_le(out_, v); }
void Writer::i32(std::int32_t v) { put_le(out_, static_cast<std::uint32_t>(v)); }
void Writer::f64(double v) { put_le(out_, std::bit_cast<std::uint64_t>(v)); }
void Writer::f64s(std::span<const double> v) {
  for (double x : v) f64(x);
}

void Writer::close() {
  out_.flush();
  if (!out_) throw IoError("error writing " + path_.string());
  out_.close();
}

Reader::Reader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open: " + path.string());
}

void Reader::read(char* dst, std::size_t n) {
  in_.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) throw ValidationError("truncated file: " + path_.string());
}

void Reader::expect_magic(std::string_view tag) {
  std::string got(tag.size(), '\0');
  read(got.data(), got.size());
  if (got != tag)
    throw ValidationError(path_.string() + ": bad magic, expected '" + std::string(tag) + "'");
}

std::uint32_t Reader::u32() {
  std::array<unsigned char, 4> buf;
  read(reinterpret_cast<char*>(buf.data()), buf.size());
  return get_le<std::uint32_t>(buf);
}

std::int32_t Reader::i32() { return static_cast<std::int32_t>(u32()); }

double Reader::f64() {
  std::array<unsigned char, 8> buf;
  read(reinterpret_cast<char*>(buf.data()), buf.size());
  return std::bit_cast<double>(get_le<std::uint64_t>(buf));
}

void Reader::f64s(std::span<double> out) {
  for (double& x : out) x = f64();
}

bool Reader::at_end() { return in_.peek() == std::char_traits<char>::eof(); }

}  // namespace scatfp::binio
