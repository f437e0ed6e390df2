#ifndef GRADFUSE_ERRORS_HPP
#define GRADFUSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gf {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define GF_DEFINE_ERROR(Name)        \
  struct Name : Error {              \
    using Error::Error;              \
  }

GF_DEFINE_ERROR(ShapeMismatch);
GF_DEFINE_ERROR(WrongScale);
GF_DEFINE_ERROR(NonPositiveDepth);
GF_DEFINE_ERROR(EmptyMask);
GF_DEFINE_ERROR(SetTooSmall);
GF_DEFINE_ERROR(TooSmall);
GF_DEFINE_ERROR(TooLarge);
GF_DEFINE_ERROR(SolverDiverged);
GF_DEFINE_ERROR(EmptyAccumulator);
GF_DEFINE_ERROR(BadSpec);
GF_DEFINE_ERROR(InvalidArgument);

// Raster / file format errors.
GF_DEFINE_ERROR(IoError);
GF_DEFINE_ERROR(BadMagic);
GF_DEFINE_ERROR(ChecksumMismatch);
GF_DEFINE_ERROR(Truncated);
GF_DEFINE_ERROR(Malformed);

// CLI configuration errors.
GF_DEFINE_ERROR(ConfigError);

#undef GF_DEFINE_ERROR

}  // namespace gf

#endif  // GRADFUSE_ERRORS_HPP
