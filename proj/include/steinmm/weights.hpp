#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace steinmm {

enum class DistKind { Exp, IG, NB };

std::string_view to_string(DistKind kind);

enum class WeightFamily {
  Identity,      // f(x) = x
  Power,         // f(x) = x^a
  OnePlusLog,    // f(x) = ln(1 + x)
  GeomOneMinus,  // f(x) = 1 − u^x,   u ∈ (0, 1)
  Constant,      // f(x) = 1
  Reciprocal,    // f(x) = 1/x
  GeomNB,        // f(x) = α^x,       α ∈ (0, 1)
  ShiftedPower,  // f(x) = (x + 1)^a
  Custom,        // user-supplied f with f′ and/or Δf; admissibility unchecked
};

// User-supplied weight for the escape hatch. Either derivative may be empty;
// a missing forward difference falls back to f(x+1) − f(x).
struct CustomWeight {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> derivative;
  std::function<double(double)> forward_difference;
};

/// A member of one of the weight families used in the Stein identities.
///
/// Values are immutable and cheap to copy. Closed families carry at most one
/// real parameter; the custom family shares its callbacks.
class WeightFunction {
public:
  static WeightFunction identity();
  static WeightFunction power(double a);
  static WeightFunction one_plus_log();
  static WeightFunction geom_one_minus(double u);
  static WeightFunction constant();
  static WeightFunction reciprocal();
  static WeightFunction geom_nb(double alpha);
  static WeightFunction shifted_power(double a);
  static WeightFunction custom(CustomWeight weight);

  /// Same family with a new free parameter (Power, GeomOneMinus, GeomNB,
  /// ShiftedPower only).
  WeightFunction with_parameter(double value) const;

  WeightFamily family() const { return family_; }
  double parameter() const { return param_; }
  bool has_parameter() const;
  bool unchecked() const { return family_ == WeightFamily::Custom; }

  /// f(x). Throws DomainError outside the family's domain.
  double eval(double x) const;
  /// f′(x). Throws DomainError where f is not differentiable.
  double deriv(double x) const;
  /// Δf(x) = f(x+1) − f(x).
  double diff(double x) const;

  /// Text encoding, e.g. "pow:a=0.9"; parse_weight(w.spec()) reproduces w.
  std::string spec() const;

private:
  WeightFunction(WeightFamily family, double param) : family_(family), param_(param) {}

  WeightFamily family_;
  double param_;
  std::shared_ptr<const CustomWeight> custom_;
};

struct Admissibility {
  DistKind distribution;
  bool ok;
  std::string reason;
};

/// Checks the side conditions of the Stein identity for `dist`:
/// Exp needs f(0) = 0; IG needs f·φ → 0 at both ends and a non-degenerate
/// estimator (x^{-1/2} is excluded); NB needs f defined on ℕ₀ with Δf ≢ 0.
Admissibility check_admissible(const WeightFunction& w, DistKind dist);

/// Parses identity | pow:a=R | log1p | geom1m:u=R | const | recip |
/// geom:alpha=R | shiftpow:a=R. Throws ParseError with the grammar on failure.
WeightFunction parse_weight(std::string_view text);

/// Grammar summary printed by the CLI on parse errors.
std::string_view weight_grammar();

/// Parses a one-parameter family name as used by the tuner: pow | geom1m |
/// geom | shiftpow. Returns a member with a placeholder parameter.
WeightFunction parse_family(std::string_view name);

}  // namespace steinmm
