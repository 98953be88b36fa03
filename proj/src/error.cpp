#include "driftlens/error.hpp"

namespace driftlens {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::SingularDiagonal: return "SingularDiagonal";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::MissingLabels: return "MissingLabels";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::AxisNotInSurface: return "AxisNotInSurface";
    case Errc::DataInvalid: return "DataInvalid";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

bool is_numerical(Errc code) noexcept {
  return code == Errc::NotPositiveDefinite || code == Errc::SingularDiagonal ||
         code == Errc::NoConvergence;
}

}  // namespace driftlens
