#include "clicksim/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace clicksim {

void ClosedFormInput::validate() const {
    if (!(c1 > 0.0 && c1 <= 1.0)) throw std::invalid_argument("ClosedFormInput: c1 must be in (0,1]");
    if (!(c2 > 0.0 && c2 <= 1.0)) throw std::invalid_argument("ClosedFormInput: c2 must be in (0,1]");
    if (k < 1) throw std::invalid_argument("ClosedFormInput: k must be >= 1");
}

double closed_form_k22(const ClosedFormInput& in) {
    in.validate();
    double sum = 0.0;
    for (int i = 1; i <= in.k; ++i) {
        sum += std::ldexp(1.0, -(i - 1)) * std::pow(in.c1, i / 2) * std::pow(in.c2, (i - 1) / 2);
    }
    return in.c2 / 2.0 * sum;
}

double closed_form_k12(const ClosedFormInput& in) {
    in.validate();
    return in.c2;
}

double closed_form_evidence_k22(const ClosedFormInput& in) { return 0.75 * closed_form_k22(in); }

}  // namespace clicksim
