#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "riccisol/soliton.hpp"

namespace riccisol {

/// An exact closed-form gradient Ricci soliton with its expected values.
/// Running the full verification suite on a fixture passes at default
/// tolerances; a fixture that fails is a catalog bug by definition.
struct Fixture {
  std::string name;
  SolitonSpec spec;
  Expr expected_scalar;      // S as a coordinate function (constant for all built-ins)
  double expected_c = 0.0;   // Hamilton constant of the stated potential
  bool trivial = false;
  Expr expected_ricci_norm2;
  Expr expected_hess_norm2;
  std::string provenance;    // closed-form derivation sketch
};

/// Flat metric on [−2,2]^n with f = (λ/2)|x|^2. Ric = 0 and Hess f = λδ, so
/// the soliton equation holds with S = 0; S + |∇f|^2 = λ^2|x|^2 = 2λf gives
/// c = 0 (already normalized). Non-trivial. Requires λ > 0.
Fixture gaussian_shrinker(int n, double lambda);

/// Same closed form with λ < 0 (flat space also carries the expanding
/// structure); fills the non-trivial-expanding cell.
Fixture gaussian_expander(int n, double lambda);

enum class EinsteinKind { Sphere, Hyperbolic };

/// Trivial (Einstein) solitons in conformal charts:
///   sphere:     g = (4r^4/(r^2+|x|^2)^2) δ on a box inside the stereographic
///               chart, λ = (n−1)/r^2, S = n(n−1)/r^2, shrinking;
///   hyperbolic: g = (4r^4/(r^2−|x|^2)^2) δ on a box inside the Poincaré ball
///               (validity predicate excludes the boundary blow-up),
///               λ = −(n−1)/r^2, S = −n(n−1)/r^2, expanding.
/// Both carry the constant potential f = n/2, which normalizes the Hamilton
/// identity: S + 0 = n(n−1)/r^2 = 2λ·(n/2).
Fixture einstein_trivial(EinsteinKind kind, int n, double r);

/// Product of the round (n−1)-sphere of radius r with a line:
/// λ = (n−2)/r^2, f = λt^2/2 + (n−1)/2, S = (n−1)λ constant. The sphere
/// factor is Einstein with Ric = λ g_sphere and the line is flat with
/// Hess f = λ dt⊗dt, so the soliton equation holds; c = 0 since
/// S + |∇f|^2 = (n−1)λ + λ^2 t^2 = 2λf. Non-trivial, requires n ≥ 3.
Fixture cylinder_shrinker(int n, double r);

/// The five CLI-addressable fixtures:
///   gaussian-shrinker-2d, gaussian-expander-2d, sphere-trivial-n2,
///   hyperbolic-trivial-n3, cylinder-n3.
const std::vector<Fixture>& builtin_fixtures();

/// nullptr when the name is unknown.
const Fixture* find_fixture(std::string_view name);

}  // namespace riccisol
