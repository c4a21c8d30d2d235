#pragma once

namespace clicksim {

/// Decay factors and iteration count for the closed forms.
struct ClosedFormInput {
    double c1 = 0.8;
    double c2 = 0.8;
    int k = 1;

    /// Throws std::invalid_argument unless c1, c2 in (0,1] and k >= 1.
    void validate() const;
};

/// Score of the two-node side of K_{2,2} after k iterations:
///   (c2/2) * sum_{i=1..k} 2^{-(i-1)} c1^{floor(i/2)} c2^{floor((i-1)/2)}
/// Unrolling the two-sided recurrence gives floor((i-1)/2) for the c2
/// exponent; ceil((i-1)/2) would make the k=2 value 0.528 instead of 0.56 at
/// c1 = c2 = 0.8.
double closed_form_k22(const ClosedFormInput& in);

/// Score of the two-node side of K_{1,2}: c2 for every k >= 1.
double closed_form_k12(const ClosedFormInput& in);

/// Evidence-based K_{2,2} score with two common neighbors: 0.75 * closed_form_k22.
double closed_form_evidence_k22(const ClosedFormInput& in);

}  // namespace clicksim
