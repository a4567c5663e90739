#include "rivergraph/error.hpp"

namespace rivergraph {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::duplicate_node: return "DuplicateNode";
    case Errc::nonpositive_length: return "NonpositiveLength";
    case Errc::unknown_station: return "UnknownStation";
    case Errc::singular_degree: return "SingularDegree";
    case Errc::different_components: return "DifferentComponents";
    case Errc::mu_out_of_range: return "MuOutOfRange";
    case Errc::isolated_row: return "IsolatedRow";
    case Errc::degenerate_sigma: return "DegenerateSigma";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::nonfinite_loss: return "NonfiniteLoss";
    case Errc::constant_observed: return "ConstantObserved";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace rivergraph
