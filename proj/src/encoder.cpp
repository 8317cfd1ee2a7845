#include "iris/encoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

namespace iris {

EncoderConfig EncoderConfig::code_192() { return EncoderConfig{}; }

EncoderConfig EncoderConfig::code_768() {
  EncoderConfig cfg;
  cfg.code_rows = 32;
  cfg.code_cols = 192;
  cfg.window_size = 16;
  return cfg;
}

void EncoderConfig::validate() const {
  if (code_rows < 1 || code_cols < 1 || code_rows > 65535 || code_cols > 65535) {
    throw Error(ErrorCode::Parameter, "encoder: code dimensions out of range");
  }
  if (window_size < 4 || window_size % 2 != 0) {
    throw Error(ErrorCode::Parameter, "encoder: window size must be even and at least 4");
  }
  if (code_cols % window_size != 0) {
    throw Error(ErrorCode::Parameter, "encoder: code columns must be a multiple of the window size");
  }
  if (bit_count() % 8 != 0) throw Error(ErrorCode::Parameter, "encoder: code must fill whole bytes");
  if (butterfly && !(butterfly_half_angle > 0.0 && butterfly_half_angle <= std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::Parameter, "encoder: butterfly half-angle must lie in (0, pi/2]");
  }
}

BitMatrix::BitMatrix(int rows, int cols, bool fill)
    : rows_(rows), cols_(cols), words_((static_cast<std::size_t>(rows) * cols + 63) / 64, fill ? ~0ULL : 0ULL) {
  if (rows < 0 || cols < 0) throw Error(ErrorCode::Shape, "BitMatrix: negative dimensions");
  clear_padding();
}

void BitMatrix::clear_padding() noexcept {
  const std::size_t used = size() & 63;
  if (used != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << used) - 1;
}

std::size_t BitMatrix::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitMatrix BitMatrix::operator&(const BitMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::Shape, "BitMatrix: shape mismatch");
  BitMatrix out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= other.words_[i];
  return out;
}

BitMatrix BitMatrix::complement() const {
  BitMatrix out = *this;
  for (auto& w : out.words_) w = ~w;
  out.clear_padding();
  return out;
}

BitMatrix BitMatrix::shifted_columns(int shift) const {
  BitMatrix out(rows_, cols_);
  if (cols_ == 0) return out;
  const int s = ((shift % cols_) + cols_) % cols_;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out.set(r, (c + s) % cols_, get(r, c));
  }
  return out;
}

BitMatrix butterfly_mask(int rows, int cols, double half_angle) {
  BitMatrix mask(rows, cols);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int c = 0; c < cols; ++c) {
    const double theta = two_pi * (c + 0.5) / cols;
    const double from_zero = std::min(theta, two_pi - theta);
    const double from_pi = std::abs(theta - std::numbers::pi);
    if (std::min(from_zero, from_pi) <= half_angle + 1e-12) {
      for (int r = 0; r < rows; ++r) mask.set(r, c, true);
    }
  }
  return mask;
}

namespace {

struct Tap {
  int index;
  double weight;
};

// Triangle-kernel taps for resampling `in` samples onto `out` samples.
std::vector<std::vector<Tap>> resample_taps(int in, int out, bool circular) {
  const double scale = static_cast<double>(out) / in;
  const double stretch = scale < 1.0 ? scale : 1.0;
  const double support = 1.0 / stretch;
  std::vector<std::vector<Tap>> taps(out);
  for (int o = 0; o < out; ++o) {
    const double center = (o + 0.5) / scale - 0.5;
    const int lo = static_cast<int>(std::floor(center - support));
    const int hi = static_cast<int>(std::ceil(center + support));
    double total = 0.0;
    for (int i = lo; i <= hi; ++i) {
      const double w = std::max(0.0, 1.0 - std::abs(i - center) * stretch);
      if (w <= 0.0) continue;
      const int idx = circular ? ((i % in) + in) % in : std::clamp(i, 0, in - 1);
      taps[o].push_back({idx, w});
      total += w;
    }
    for (auto& t : taps[o]) t.weight /= total;
  }
  return taps;
}

}  // namespace

RealImage resize_band(const UnwrappedIris& band, int rows, int cols) {
  const int in_rows = static_cast<int>(band.rows());
  const int in_cols = band.width();
  if (in_rows < 1 || in_cols < 1) throw Error(ErrorCode::DegenerateRing, "resize: empty band");
  const auto col_taps = resample_taps(in_cols, cols, true);
  const auto row_taps = resample_taps(in_rows, rows, false);

  std::vector<std::vector<double>> horizontal(in_rows, std::vector<double>(cols));
  for (int r = 0; r < in_rows; ++r) {
    const auto& src = band.rui[r];
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (const auto& t : col_taps[c]) acc += t.weight * src[t.index];
      horizontal[r][c] = acc;
    }
  }
  RealImage out(cols, rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (const auto& t : row_taps[r]) acc += t.weight * horizontal[t.index][c];
      out(c, r) = acc;
    }
  }
  return out;
}

IrisCode encode_band(const RealImage& band, const EncoderConfig& cfg, std::string id) {
  cfg.validate();
  if (band.width() != cfg.code_cols || band.height() != cfg.code_rows) {
    throw Error(ErrorCode::Shape, "encode: band does not match the code dimensions");
  }
  IrisCode code;
  code.config = cfg;
  code.id = std::move(id);
  code.bits = BitMatrix(cfg.code_rows, cfg.code_cols);
  code.mask = cfg.butterfly ? butterfly_mask(cfg.code_rows, cfg.code_cols, cfg.butterfly_half_angle)
                            : BitMatrix(cfg.code_rows, cfg.code_cols, true);
  for (int r = 0; r < cfg.code_rows; ++r) {
    const auto row = band.row(r);
    const auto analytic = analytic_row(row, cfg.window_size, cfg.phase);
    for (int c = 0; c < cfg.code_cols; ++c) {
      code.bits.set(r, c, analytic.phase[c] >= 0.0);
      // Saturated samples carry no texture.
      if (row[c] < 0.5 || row[c] >= 254.5) code.mask.set(r, c, false);
    }
  }
  return code;
}

IrisCode encode(const IrisRing& ring, const EncoderConfig& cfg, std::string id) {
  cfg.validate();
  if (ring.unwrapped.rows() < 2) {
    throw Error(ErrorCode::DegenerateRing, "encode: iris band is thinner than 2 lines");
  }
  return encode_band(resize_band(ring.unwrapped, cfg.code_rows, cfg.code_cols), cfg, std::move(id));
}

namespace {

void put_u16(std::vector<std::uint8_t>& out, int v) {
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void pack(std::vector<std::uint8_t>& out, const BitMatrix& m) {
  std::uint8_t byte = 0;
  int filled = 0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      byte = static_cast<std::uint8_t>((byte << 1) | (m.get(r, c) ? 1 : 0));
      if (++filled == 8) {
        out.push_back(byte);
        byte = 0;
        filled = 0;
      }
    }
  }
}

BitMatrix unpack(std::span<const std::uint8_t> bytes, int rows, int cols) {
  BitMatrix m(rows, cols);
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c, ++i) m.set(r, c, (bytes[i / 8] >> (7 - i % 8)) & 1U);
  }
  return m;
}

}  // namespace

std::vector<std::uint8_t> serialize_code(const IrisCode& code) {
  code.config.validate();
  std::vector<std::uint8_t> out = {'G', 'A', 'I', 'T', kCodeFormatVersion};
  put_u16(out, code.config.code_rows);
  put_u16(out, code.config.code_cols);
  put_u16(out, code.config.window_size);
  out.push_back(static_cast<std::uint8_t>(code.config.phase));
  pack(out, code.bits);
  pack(out, code.mask);
  return out;
}

IrisCode deserialize_code(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t header = 12;
  if (bytes.size() < header || bytes[0] != 'G' || bytes[1] != 'A' || bytes[2] != 'I' || bytes[3] != 'T') {
    throw Error(ErrorCode::Format, "gcode: bad magic");
  }
  if (bytes[4] != kCodeFormatVersion) throw Error(ErrorCode::Format, "gcode: unsupported version");
  auto u16 = [&](std::size_t at) { return (bytes[at] << 8) | bytes[at + 1]; };
  IrisCode code;
  code.config.code_rows = u16(5);
  code.config.code_cols = u16(7);
  code.config.window_size = u16(9);
  if (bytes[11] > 1) throw Error(ErrorCode::Format, "gcode: unknown phase convention");
  code.config.phase = static_cast<PhaseConvention>(bytes[11]);
  code.config.butterfly = false;  // the mask already carries any sector restriction
  code.config.validate();
  const std::size_t plane = code.config.byte_count();
  if (bytes.size() != header + 2 * plane) throw Error(ErrorCode::Format, "gcode: payload size mismatch");
  code.bits = unpack(bytes.subspan(header, plane), code.config.code_rows, code.config.code_cols);
  code.mask = unpack(bytes.subspan(header + plane, plane), code.config.code_rows, code.config.code_cols);
  return code;
}

void save_code(const IrisCode& code, const std::filesystem::path& path) {
  const auto bytes = serialize_code(code);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

IrisCode load_code(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto code = deserialize_code(bytes);
  code.id = path.stem().string();
  return code;
}

}  // namespace iris
