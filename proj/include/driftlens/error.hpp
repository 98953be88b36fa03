#pragma once

#include <stdexcept>
#include <string>

namespace driftlens {

enum class Errc {
  DimensionMismatch,
  NotSymmetric,
  NotPositiveDefinite,
  SingularDiagonal,
  NoConvergence,
  EmptyDataset,
  MissingLabels,
  EmptyClass,
  DimensionTooLarge,
  RankDeficient,
  InvalidArgument,
  EmptyReference,
  LengthMismatch,
  EmptyInput,
  MalformedLine,
  IndexOutOfRange,
  NonFiniteValue,
  AxisNotInSurface,
  DataInvalid,
  Io,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

bool is_numerical(Errc code) noexcept;

}  // namespace driftlens
