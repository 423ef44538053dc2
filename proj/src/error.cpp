#include "flowsep/error.hpp"

namespace flowsep {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadDimensions: return "BadDimensions";
    case Errc::Truncated: return "Truncated";
    case Errc::NonFinite: return "NonFinite";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ClipTooShort: return "ClipTooShort";
    case Errc::MissingClass: return "MissingClass";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::NotOneHot: return "NotOneHot";
    case Errc::EmptyScores: return "EmptyScores";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace flowsep
