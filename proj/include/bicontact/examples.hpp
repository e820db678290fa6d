#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bicontact/coframe.hpp"

namespace bicontact {

// A generated coframe together with the invariant values it is known to
// have. Expected values are expressions in the chart coordinates.
struct ExampleSpec {
  std::string name;
  std::string description;
  Coframe coframe;
  std::vector<std::pair<std::string, std::string>> expected;
  Box box;  // default sampling region

  // Expected value of `key` at p; throws Error when the table lacks it.
  double expected_value(const std::string& key, std::span<const double> p) const;
  bool has_expected(const std::string& key) const;
};

// dx + dy - (q1/C3) dz, dx - dy + (q2/C3) dz, dz/C3 with
// q1 = (x+y)z - (x-y), q2 = eps(x+y) + (x-y)z. Already one-adapted, C = z.
// The C3 argument is an expression in z.
ExampleSpec example_hyp_C3(int eps, const std::string& c3 = "1");

// Constant C = sinh(2 psi) on a (theta, phi, z) chart; Psi is an expression in z.
ExampleSpec example_T2xR(double psi, const std::string& Psi = "z");

// Normal form with A1 = A2 = 0 for arbitrary f(x), g(x); needs 0 < x < pi/4
// and y > 0. C = cot 2x for eps = 1 and -csc 2x for eps = -1.
ExampleSpec normal_form_3d(int eps, const std::string& f = "0", const std::string& g = "0");

// (eta1, eta2, dx) from the eps = 1 normal form; C = csc(2x)/y. Needs y > 0
// and sin 2x != 0.
ExampleSpec eta_frame(const std::string& f = "0", const std::string& g = "0");

enum class Example4d { Ezero, Enonzero };
// Ezero: the hyp-ex forms scaled by e^-s with w4 = ds. Enonzero: C = -tan z, E = e^(2w-y(x+z))/y.
ExampleSpec example_4d(Example4d kind, int eps = -1, const std::string& c3 = "1");

// Euler-angle coframe on (theta, phi, psi) with dw1 = w2^w3, dw2 = -w1^w3,
// dw3 = w1^w2.
ExampleSpec sphere_frame();

// A case-1 structure (C3 = 0, dC != 0) with eps = -1 after adaptation.
ExampleSpec case1_frame();

// Registry for the command line: name plus string parameters.
std::vector<std::string> example_names();
ExampleSpec make_example(const std::string& name,
                         const std::vector<std::pair<std::string, std::string>>& params);

}  // namespace bicontact
