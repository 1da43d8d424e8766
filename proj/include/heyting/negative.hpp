// Negative translations of classical into intuitionistic logic, and the
// classical-to-two-variable pipeline through the omega embedding.

#pragma once

#include "heyting/formula.hpp"
#include "heyting/omega.hpp"

namespace heyting {

// x -> ~~x, F and T fixed, & and -> pointwise, a | b -> ~(~a' & ~b').
Formula godel_gentzen(Formula f);
// ~~f.
Formula glivenko(Formula f);
// f'(godel_gentzen(f)) with f'(r) = f_omega(T) -> f_omega(r), the lift that
// makes the omega embedding tautology-respecting. Throws VariableBeyondBound
// past the variable bound of `omega`.
Formula classical_to_ipc2(Omega& omega, Formula f);

}  // namespace heyting
