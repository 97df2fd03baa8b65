#include "driftbench/errors.hpp"

namespace driftbench {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::not_positive_definite: return "NotPositiveDefinite";
    case Errc::empty_input: return "EmptyInput";
    case Errc::insufficient_points: return "InsufficientPoints";
    case Errc::degenerate_design: return "DegenerateDesign";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::parse_error: return "ParseError";
    case Errc::foreign_key: return "ForeignKeyError";
    case Errc::invalid_range: return "InvalidRange";
    case Errc::unknown_ap: return "UnknownAp";
    case Errc::unknown_rp: return "UnknownRp";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::no_detections: return "NoDetections";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::non_finite_feature: return "NonFiniteFeature";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::empty_database: return "EmptyDatabase";
    case Errc::empty_train_slice: return "EmptyTrainSlice";
    case Errc::ap_not_alive: return "ApNotAlive";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace driftbench
