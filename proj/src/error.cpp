#include "polsig/error.hpp"

namespace polsig {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateRegressor: return "DegenerateRegressor";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::EmptyCoalition: return "EmptyCoalition";
    case ErrorKind::InvalidShare: return "InvalidShare";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NoVariation: return "NoVariation";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnknownPolitician: return "UnknownPolitician";
    case ErrorKind::DuplicateDyad: return "DuplicateDyad";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SchemaError:
    case ErrorKind::UnknownPolitician:
    case ErrorKind::DuplicateDyad:
      return 2;
    case ErrorKind::InsufficientData:
    case ErrorKind::DegenerateRegressor:
    case ErrorKind::DegenerateRange:
    case ErrorKind::RankDeficient:
    case ErrorKind::NoVariation:
    case ErrorKind::ZeroVariance:
    case ErrorKind::EmptyGraph:
    case ErrorKind::EmptyGroup:
    case ErrorKind::ZeroWeight:
    case ErrorKind::EmptyCoalition:
      return 3;
    case ErrorKind::InvalidShare:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ConfigError:
      return 4;
    case ErrorKind::IoError:
      return 5;
  }
  return 5;
}

}  // namespace polsig
