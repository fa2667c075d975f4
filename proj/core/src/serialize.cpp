#include "mgtd/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mgtd {

void BinaryWriter::u8(std::uint8_t v) { buffer_.push_back(v); }

void BinaryWriter::u32(std::uint32_t v) {
  for (int k = 0; k < 4; ++k) buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void BinaryWriter::u64(std::uint64_t v) {
  for (int k = 0; k < 8; ++k) buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void BinaryWriter::i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::str(std::string_view s) {
  u64(s.size());
  raw(s.data(), s.size());
}

void BinaryWriter::f64_vec(const std::vector<double>& v) {
  u64(v.size());
  for (double x : v) f64(x);
}

void BinaryWriter::u32_vec(const std::vector<std::uint32_t>& v) {
  u64(v.size());
  for (auto x : v) u32(x);
}

void BinaryWriter::raw(const void* data, std::size_t size) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  buffer_.insert(buffer_.end(), p, p + size);
}

void BinaryReader::need(std::size_t n) const {
  if (n > buffer_.size() - pos_)
    throw std::runtime_error("incompatible model file: truncated input");
}

std::uint8_t BinaryReader::u8() {
  need(1);
  return buffer_[pos_++];
}

std::uint32_t BinaryReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(buffer_[pos_++]) << (8 * k);
  return v;
}

std::uint64_t BinaryReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(buffer_[pos_++]) << (8 * k);
  return v;
}

std::int32_t BinaryReader::i32() { return static_cast<std::int32_t>(u32()); }

double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

std::string BinaryReader::str() {
  const auto size = u64();
  need(size);
  std::string s(reinterpret_cast<const char*>(buffer_.data() + pos_), size);
  pos_ += size;
  return s;
}

std::vector<double> BinaryReader::f64_vec() {
  const auto size = u64();
  if (size > (buffer_.size() - pos_) / 8)
    throw std::runtime_error("incompatible model file: truncated input");
  std::vector<double> v(size);
  for (auto& x : v) x = f64();
  return v;
}

std::vector<std::uint32_t> BinaryReader::u32_vec() {
  const auto size = u64();
  if (size > (buffer_.size() - pos_) / 4)
    throw std::runtime_error("incompatible model file: truncated input");
  std::vector<std::uint32_t> v(size);
  for (auto& x : v) x = u32();
  return v;
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const auto size = in.tellg();
  in.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw std::runtime_error("short read from '" + path + "'");
  return bytes;
}

}  // namespace mgtd
