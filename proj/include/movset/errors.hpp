#pragma once

#include <stdexcept>
#include <string>

namespace movset {

// Failure categories surfaced by the solvers.  Geometry/config misuse and
// numerical breakdown are kept apart so the CLI can map them to exit codes.
enum class Err {
  InvalidBoundary,        // arc chain does not close, leaves the domain, or is mis-oriented
  Unsupported,            // operation not defined for this domain/configuration
  OutOfRange,             // parameter outside the documented range
  NoBracket,              // root/area bracketing failed
  NoConvergence,          // iteration exceeded its budget
  NotAMaximum,            // smooth boundary point fails the curvature-maximum test
  BelowThreshold,         // effort too small for the requested strategy
  ShootingFailed,         // strategy shooting loop found no admissible parameter
  StageOneDiverged,       // wedge stage-1 arc family left the domain
  FitFailed,              // generic step could not re-fit the controlled arc
  Stalled,                // evolution stopped with positive area remaining
  SlicingTooLong,         // a level set exceeds the sustainable front length
  TrajectoryReconstructionFailed,
  TimesNotBracketed,      // free-arc window does not bracket the requested trajectory
  Subcritical,            // symmetric free arc needs M >= 4*rho
  DegenerateDenominator,  // rate formula denominator vanished
  AngleDegeneracy,        // corner-interface angle hit 0 or pi/2
  LeftDomain,             // Picard iterate violated its a-priori bounds
  NoContraction,          // Picard failed to contract even after shrinking x-dagger
  Config,                 // bad user input (CLI/scenario files)
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidBoundary: return "InvalidBoundary";
    case Err::Unsupported: return "Unsupported";
    case Err::OutOfRange: return "OutOfRange";
    case Err::NoBracket: return "NoBracket";
    case Err::NoConvergence: return "NoConvergence";
    case Err::NotAMaximum: return "NotAMaximum";
    case Err::BelowThreshold: return "BelowThreshold";
    case Err::ShootingFailed: return "ShootingFailed";
    case Err::StageOneDiverged: return "StageOneDiverged";
    case Err::FitFailed: return "FitFailed";
    case Err::Stalled: return "Stalled";
    case Err::SlicingTooLong: return "SlicingTooLong";
    case Err::TrajectoryReconstructionFailed: return "TrajectoryReconstructionFailed";
    case Err::TimesNotBracketed: return "TimesNotBracketed";
    case Err::Subcritical: return "Subcritical";
    case Err::DegenerateDenominator: return "DegenerateDenominator";
    case Err::AngleDegeneracy: return "AngleDegeneracy";
    case Err::LeftDomain: return "LeftDomain";
    case Err::NoContraction: return "NoContraction";
    case Err::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace movset
