#include "gradfuse/raster_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

namespace gf {

namespace {

constexpr char kMagic[4] = {'G', 'F', 'R', '1'};
constexpr std::size_t kHeaderSize = 20;
constexpr std::uint32_t kQuietNan = 0x7FC00000u;

void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32le(std::string& out, float f) { put_u32le(out, std::bit_cast<std::uint32_t>(f)); }

float get_f32le(const unsigned char* p) { return std::bit_cast<float>(get_u32le(p)); }

std::uint32_t payload_crc(const std::string& payload) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(payload.data()),
              static_cast<uInt>(payload.size())));
}

void write_raster_file(const std::string& path, RasterKind kind, Scale scale, std::uint32_t h,
                       std::uint32_t w, const std::string& payload) {
  std::string out;
  out.reserve(kHeaderSize + payload.size());
  out.append(kMagic, 4);
  out.push_back(static_cast<char>(kind));
  out.push_back(static_cast<char>(scale));
  out.push_back(0);
  out.push_back(0);
  put_u32le(out, h);
  put_u32le(out, w);
  put_u32le(out, payload_crc(payload));
  out += payload;
  atomic_write_file(path, out);
}

struct RawRaster {
  RasterHeader header;
  std::string payload;
};

std::size_t payload_size(RasterKind kind, std::uint32_t h, std::uint32_t w) {
  std::size_t n = static_cast<std::size_t>(h) * w;
  switch (kind) {
    case RasterKind::Depth:
    case RasterKind::GradientX:
    case RasterKind::GradientY:
      return n * 4;
    case RasterKind::Mask:
      return n;
    case RasterKind::Rgb:
      return n * 3;
  }
  throw Malformed("raster: unknown kind");
}

RasterHeader parse_header(const std::string& bytes, const std::string& path) {
  if (bytes.size() < kHeaderSize) throw Truncated(path + ": shorter than the 20-byte header");
  if (bytes.compare(0, 4, kMagic, 4) != 0) throw BadMagic(path + ": not a GFR1 raster");
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  RasterHeader hdr;
  if (p[4] > 4) throw Malformed(path + ": unknown raster kind " + std::to_string(p[4]));
  hdr.kind = static_cast<RasterKind>(p[4]);
  if (p[5] > 1) throw Malformed(path + ": unknown scale tag " + std::to_string(p[5]));
  hdr.scale = static_cast<Scale>(p[5]);
  hdr.height = get_u32le(p + 8);
  hdr.width = get_u32le(p + 12);
  if (hdr.height == 0 || hdr.width == 0) throw Malformed(path + ": zero dimension");
  return hdr;
}

RawRaster read_raster_file(const std::string& path, RasterKind expected) {
  std::string bytes = read_file_bytes(path);
  RawRaster raw;
  raw.header = parse_header(bytes, path);
  if (raw.header.kind != expected) {
    throw Malformed(path + ": raster kind " + std::to_string(static_cast<int>(raw.header.kind)) +
                    ", expected " + std::to_string(static_cast<int>(expected)));
  }
  std::size_t expect = payload_size(raw.header.kind, raw.header.height, raw.header.width);
  if (bytes.size() < kHeaderSize + expect) {
    throw Truncated(path + ": payload has " + std::to_string(bytes.size() - kHeaderSize) +
                    " bytes, expected " + std::to_string(expect));
  }
  if (bytes.size() > kHeaderSize + expect) {
    throw Malformed(path + ": trailing bytes after payload");
  }
  raw.payload = bytes.substr(kHeaderSize);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (payload_crc(raw.payload) != get_u32le(p + 16)) {
    throw ChecksumMismatch(path + ": payload checksum disagrees with header");
  }
  return raw;
}

std::string float_plane_payload(const std::vector<double>& values, const ValidMask& mask) {
  std::string payload;
  payload.reserve(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask.bits[i]) {
      put_f32le(payload, static_cast<float>(values[i]));
    } else {
      put_u32le(payload, kQuietNan);
    }
  }
  return payload;
}

void decode_float_plane(const std::string& payload, std::vector<double>& values,
                        ValidMask& mask) {
  const unsigned char* p = reinterpret_cast<const unsigned char*>(payload.data());
  for (std::size_t i = 0; i < values.size(); ++i) {
    float f = get_f32le(p + i * 4);
    if (std::isfinite(f)) {
      values[i] = f;
      mask.bits[i] = 1;
    } else {
      values[i] = 0.0;
      mask.bits[i] = 0;
    }
  }
}

}  // namespace

RasterHeader peek_raster(const std::string& path) {
  return parse_header(read_file_bytes(path), path);
}

void write_depth_raster(const std::string& path, const DepthMap& d) {
  check_invariants(d, "write_depth_raster");
  write_raster_file(path, RasterKind::Depth, d.scale, static_cast<std::uint32_t>(d.height),
                    static_cast<std::uint32_t>(d.width), float_plane_payload(d.values, d.mask));
}

DepthMap read_depth_raster(const std::string& path) {
  RawRaster raw = read_raster_file(path, RasterKind::Depth);
  DepthMap d;
  d.height = static_cast<int>(raw.header.height);
  d.width = static_cast<int>(raw.header.width);
  d.scale = raw.header.scale;
  d.values.assign(d.pixel_count(), 0.0);
  d.mask = ValidMask::all_invalid(d.height, d.width);
  decode_float_plane(raw.payload, d.values, d.mask);
  check_invariants(d, path.c_str());
  return d;
}

void write_gradient_rasters(const std::string& path_x, const std::string& path_y,
                            const GradientMap& g) {
  check_invariants(g, "write_gradient_rasters");
  write_raster_file(path_x, RasterKind::GradientX, g.scale,
                    static_cast<std::uint32_t>(g.height), static_cast<std::uint32_t>(g.width),
                    float_plane_payload(g.gx, g.mask));
  write_raster_file(path_y, RasterKind::GradientY, g.scale,
                    static_cast<std::uint32_t>(g.height), static_cast<std::uint32_t>(g.width),
                    float_plane_payload(g.gy, g.mask));
}

GradientMap read_gradient_rasters(const std::string& path_x, const std::string& path_y) {
  RawRaster raw_x = read_raster_file(path_x, RasterKind::GradientX);
  RawRaster raw_y = read_raster_file(path_y, RasterKind::GradientY);
  if (raw_x.header.height != raw_y.header.height || raw_x.header.width != raw_y.header.width) {
    throw ShapeMismatch(path_x + " and " + path_y + ": dimensions disagree");
  }
  if (raw_x.header.scale != raw_y.header.scale) {
    throw WrongScale(path_x + " and " + path_y + ": scale tags disagree");
  }
  GradientMap g;
  g.height = static_cast<int>(raw_x.header.height);
  g.width = static_cast<int>(raw_x.header.width);
  g.scale = raw_x.header.scale;
  std::size_t n = static_cast<std::size_t>(g.height) * g.width;
  g.gx.assign(n, 0.0);
  g.gy.assign(n, 0.0);
  ValidMask mx = ValidMask::all_invalid(g.height, g.width);
  ValidMask my = mx;
  decode_float_plane(raw_x.payload, g.gx, mx);
  decode_float_plane(raw_y.payload, g.gy, my);
  g.mask = valid_intersection(mx, my);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.mask.bits[i]) {
      g.gx[i] = 0.0;
      g.gy[i] = 0.0;
    }
  }
  return g;
}

void write_mask_raster(const std::string& path, const ValidMask& mask) {
  std::string payload;
  payload.reserve(mask.bits.size());
  for (std::uint8_t b : mask.bits) payload.push_back(b ? 1 : 0);
  write_raster_file(path, RasterKind::Mask, Scale::Linear,
                    static_cast<std::uint32_t>(mask.height),
                    static_cast<std::uint32_t>(mask.width), payload);
}

ValidMask read_mask_raster(const std::string& path) {
  RawRaster raw = read_raster_file(path, RasterKind::Mask);
  ValidMask mask = ValidMask::all_invalid(static_cast<int>(raw.header.height),
                                          static_cast<int>(raw.header.width));
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    unsigned char b = static_cast<unsigned char>(raw.payload[i]);
    if (b > 1) throw Malformed(path + ": mask byte out of range");
    mask.bits[i] = b;
  }
  return mask;
}

void write_rgb_raster(const std::string& path, const RgbImage& img) {
  std::string payload;
  payload.reserve(img.rgb.size());
  for (double v : img.rgb) {
    long q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    payload.push_back(static_cast<char>(static_cast<unsigned char>(q)));
  }
  write_raster_file(path, RasterKind::Rgb, Scale::Linear, static_cast<std::uint32_t>(img.height),
                    static_cast<std::uint32_t>(img.width), payload);
}

RgbImage read_rgb_raster(const std::string& path) {
  RawRaster raw = read_raster_file(path, RasterKind::Rgb);
  RgbImage img;
  img.height = static_cast<int>(raw.header.height);
  img.width = static_cast<int>(raw.header.width);
  img.rgb.resize(static_cast<std::size_t>(img.height) * img.width * 3);
  for (std::size_t i = 0; i < img.rgb.size(); ++i) {
    img.rgb[i] = static_cast<unsigned char>(raw.payload[i]) / 255.0;
  }
  return img;
}

void export_pfm(const std::string& path, const DepthMap& d) {
  if (d.scale != Scale::Linear) {
    throw WrongScale("export_pfm: PFM carries no scale tag; convert to linear first");
  }
  check_invariants(d, "export_pfm");
  std::string out = "Pf\n" + std::to_string(d.width) + " " + std::to_string(d.height) + "\n-1.0\n";
  // Rows bottom to top.
  for (int y = d.height - 1; y >= 0; --y) {
    for (int x = 0; x < d.width; ++x) {
      if (d.valid(x, y)) {
        put_f32le(out, static_cast<float>(d.at(x, y)));
      } else {
        put_u32le(out, kQuietNan);
      }
    }
  }
  atomic_write_file(path, out);
}

DepthMap import_pfm(const std::string& path) {
  std::string bytes = read_file_bytes(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw Malformed(path + ": truncated PFM header");
    return bytes.substr(start, pos - start);
  };

  std::string magic = next_token();
  if (magic == "PF") throw Malformed(path + ": colour PFM not supported, expected grayscale Pf");
  if (magic != "Pf") throw Malformed(path + ": not a PFM file");

  int w = 0, h = 0;
  double scale_line = 0.0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
    scale_line = std::stod(next_token());
  } catch (const std::exception&) {
    throw Malformed(path + ": unparseable PFM dimensions or scale");
  }
  if (w <= 0 || h <= 0) throw Malformed(path + ": non-positive PFM dimensions");
  if (scale_line == 0.0) throw Malformed(path + ": zero PFM scale line");
  const bool little_endian = scale_line < 0.0;

  // Exactly one whitespace byte separates the scale line from the raster.
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw Malformed(path + ": missing separator before PFM raster");
  }
  ++pos;

  std::size_t need = static_cast<std::size_t>(w) * h * 4;
  if (bytes.size() - pos < need) {
    throw Malformed(path + ": PFM raster truncated (" + std::to_string(bytes.size() - pos) +
                    " of " + std::to_string(need) + " bytes)");
  }

  DepthMap d;
  d.height = h;
  d.width = w;
  d.scale = Scale::Linear;
  d.values.assign(d.pixel_count(), 0.0);
  d.mask = ValidMask::all_invalid(h, w);
  const unsigned char* raster = reinterpret_cast<const unsigned char*>(bytes.data()) + pos;
  for (int file_row = 0; file_row < h; ++file_row) {
    int y = h - 1 - file_row;  // PFM rows run bottom to top
    for (int x = 0; x < w; ++x) {
      const unsigned char* q = raster + (static_cast<std::size_t>(file_row) * w + x) * 4;
      std::uint32_t bits;
      if (little_endian) {
        bits = get_u32le(q);
      } else {
        bits = (static_cast<std::uint32_t>(q[0]) << 24) | (static_cast<std::uint32_t>(q[1]) << 16) |
               (static_cast<std::uint32_t>(q[2]) << 8) | static_cast<std::uint32_t>(q[3]);
      }
      float f = std::bit_cast<float>(bits);
      if (std::isfinite(f) && f > 0.0f) {
        d.at(x, y) = f;
        d.mask.set(x, y, true);
      }
    }
  }
  return d;
}

void atomic_write_file(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(tmp.string() + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path + ": rename failed: " + ec.message());
  }
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path + ": read failed");
  return bytes;
}

}  // namespace gf
