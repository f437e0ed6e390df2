#ifndef GRADFUSE_RASTER_IO_HPP
#define GRADFUSE_RASTER_IO_HPP

#include <string>

#include "gradfuse/core.hpp"

namespace gf {

// GFR1 raster container. Header is 20 bytes, little-endian:
//   bytes  0..3   magic "GFR1"
//   byte   4      kind (Depth=0, GradientX=1, GradientY=2, Mask=3, Rgb=4)
//   byte   5      scale (0 linear, 1 log; 0 for Mask/Rgb)
//   bytes  6..7   reserved, zero
//   bytes  8..11  height (u32)
//   bytes 12..15  width  (u32)
//   bytes 16..19  CRC-32 of the payload
// Payload: row-major float32 for Depth/GradientX/GradientY (invalid pixels
// stored as quiet NaN 0x7FC00000), one byte per pixel for Mask, and three
// bytes r,g,b per pixel for Rgb (values quantized by round(v*255)).
enum class RasterKind : std::uint8_t {
  Depth = 0,
  GradientX = 1,
  GradientY = 2,
  Mask = 3,
  Rgb = 4,
};

struct RasterHeader {
  RasterKind kind = RasterKind::Depth;
  Scale scale = Scale::Linear;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
};

// Reads just the header; same errors as the full readers.
RasterHeader peek_raster(const std::string& path);

void write_depth_raster(const std::string& path, const DepthMap& d);
DepthMap read_depth_raster(const std::string& path);

// A gradient map occupies two files (GradientX and GradientY); on read the
// two NaN masks are intersected.
void write_gradient_rasters(const std::string& path_x, const std::string& path_y,
                            const GradientMap& g);
GradientMap read_gradient_rasters(const std::string& path_x, const std::string& path_y);

void write_mask_raster(const std::string& path, const ValidMask& mask);
ValidMask read_mask_raster(const std::string& path);

void write_rgb_raster(const std::string& path, const RgbImage& img);
RgbImage read_rgb_raster(const std::string& path);

// Grayscale PFM ("Pf"). The scale line's sign selects endianness; rows are
// stored bottom-to-top. On import, NaN or non-positive samples become invalid
// pixels. Export requires Linear scale (PFM carries no scale tag) and writes
// NaN at invalid pixels.
void export_pfm(const std::string& path, const DepthMap& d);
DepthMap import_pfm(const std::string& path);

// Writes via a temp file in the same directory plus rename, so a crashed run
// never leaves a half-written file. Used by every writer in the library.
void atomic_write_file(const std::string& path, const std::string& bytes);

// Whole-file read; throws IoError naming the path.
std::string read_file_bytes(const std::string& path);

}  // namespace gf

#endif  // GRADFUSE_RASTER_IO_HPP
