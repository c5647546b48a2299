#include "spns/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "spns/errors.hpp"

namespace spns {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts need byte swapping");

namespace {

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    require(pos_ + sizeof(T) <= bytes_.size(), ErrorKind::io, "field file truncated in header");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  const char* cursor() const { return bytes_.data() + pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_field(const Field& f) {
  const Grid& g = f.grid();
  std::string out = "SPNS";
  put<std::uint32_t>(out, field_format_version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put<double>(out, g.length());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.components()));
  auto values = f.values();
  out.append(reinterpret_cast<const char*>(values.data()), values.size() * sizeof(double));
  return out;
}

Field decode_field(const std::string& bytes) {
  require(bytes.size() >= 4 && bytes.compare(0, 4, "SPNS") == 0, ErrorKind::io,
          "not a field file (bad magic)");
  Reader r(bytes);
  r.get<std::uint32_t>();
  const auto version = r.get<std::uint32_t>();
  require(version == field_format_version, ErrorKind::io,
          "unsupported field file version " + std::to_string(version));
  const auto d = r.get<std::uint32_t>();
  require(d >= 1 && d <= 3, ErrorKind::io, "field file dimension out of range");
  std::uint32_t n = 0;
  for (std::uint32_t a = 0; a < d; ++a) {
    const auto na = r.get<std::uint32_t>();
    require(a == 0 || na == n, ErrorKind::io, "anisotropic grids are not supported");
    n = na;
  }
  const auto L = r.get<double>();
  const auto components = r.get<std::uint32_t>();
  Grid grid(static_cast<int>(d), static_cast<int>(n), L);
  const std::size_t expected = static_cast<std::size_t>(components) * grid.size() * sizeof(double);
  require(r.remaining() == expected, ErrorKind::io,
          "field payload has " + std::to_string(r.remaining()) + " bytes, header implies " +
              std::to_string(expected));
  std::vector<double> values(components * grid.size());
  std::memcpy(values.data(), r.cursor(), expected);
  return Field(grid, static_cast<int>(components), std::move(values));
}

void write_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
  const std::string bytes = encode_field(f);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorKind::io, "write failed: " + path.string());
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_field(ss.str());
}

}  // namespace spns
