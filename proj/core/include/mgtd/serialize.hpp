#ifndef MGTD_SERIALIZE_HPP
#define MGTD_SERIALIZE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mgtd {

// Little-endian binary writer with length-prefixed strings. Identical
// field sequences always produce identical bytes.
class BinaryWriter {
 public:
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v);
  void f64(double v);  // exact IEEE-754 bits
  void str(std::string_view s);
  void f64_vec(const std::vector<double>& v);
  void u32_vec(const std::vector<std::uint32_t>& v);
  void raw(const void* data, std::size_t size);

  const std::vector<std::uint8_t>& bytes() const { return buffer_; }

 private:
  std::vector<std::uint8_t> buffer_;
};

// Matching reader; any read past the end throws (truncated input).
class BinaryReader {
 public:
  explicit BinaryReader(std::vector<std::uint8_t> bytes) : buffer_(std::move(bytes)) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32();
  double f64();
  std::string str();
  std::vector<double> f64_vec();
  std::vector<std::uint32_t> u32_vec();
  bool at_end() const { return pos_ == buffer_.size(); }
  std::size_t remaining() const { return buffer_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::vector<std::uint8_t> buffer_;
  std::size_t pos_ = 0;
};

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_file_bytes(const std::string& path);

}  // namespace mgtd

#endif  // MGTD_SERIALIZE_HPP
