#pragma once

#include <stdexcept>
#include <string>

namespace convexflow {

enum class Errc {
  DegenerateInput,
  NoIntersection,
  Degenerate,
  QuadratureTooCoarse,
  LevelTooLarge,
  DegenerateTriangle,
  IllConditionedStencil,
  StepRejected,
  ExtinctionReached,
  StallDetected,
  BudgetExceeded,
  MissingPanel,
  ScheduleMismatch,
  CorrespondenceAmbiguous,
  ArtifactMismatch,
  ParseError,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Thrown by ricci_flow::step when the triangle-inequality margin drops below
// the rejection threshold; carries the offending margin.
class StepRejected : public Error {
 public:
  explicit StepRejected(double margin)
      : Error(Errc::StepRejected, "triangle margin " + std::to_string(margin)), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

}  // namespace convexflow
