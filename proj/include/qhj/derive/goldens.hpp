#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhj::derive {

// Frozen reference expressions the derivation pipelines are checked against.
// Each text is parsed with the library grammar (docs/expression-grammar.md) and
// compared for exact symbolic equality. A checksum manifest in the test suite
// pins every text; editing one without updating the manifest fails the build.
//
// Labels with a "reported-" prefix are published variants that disagree with
// the algebra the pipelines replay. They are never gating; the reports surface
// the differences as notes.
struct Golden {
  std::string_view label;
  std::string_view text;
};

inline constexpr Golden kGoldens[] = {
    // --- nonrelativistic template, generic coefficients ----------------------
    {"weyl-hamiltonian",
     "(1/(8*m))*a*A_ij*p_i*p_j + (1/(4*m))*p_i*a*A_ij*p_j + "
     "(1/(8*m))*p_i*p_j*a*A_ij + (1/2)*b_i*p_i + (1/2)*p_i*b_i + c"},
    {"qhj-operator",
     "(1/(8*m))*a*A_ij*dS/dq_i*dS/dq_j + (1/(4*m))*dS/dq_i*a*A_ij*dS/dq_j + "
     "(1/(8*m))*dS/dq_i*dS/dq_j*a*A_ij + (1/2)*b_i*dS/dq_i + "
     "(1/2)*dS/dq_i*b_i + (1/2)*a*dS/dt + (1/2)*dS/dt*a + c"},
    {"cnumber-combined",
     "(a/m)*A_ij*(d[S]/dq_i*d[S]/dq_j - i*hbar*d[S]/dq_i/dq_j) + 2*a*d[S]/dt + "
     "2*(b_i - (i*hbar/(2*m))*d[a]/dq_j*A_ij)*d[S]/dq_i + 2*c - "
     "i*hbar*d[b_i]/dq_i - (hbar^2/(4*m))*d[a]/dq_i/dq_j*A_ij - i*hbar*d[a]/dt"},
    {"real-part",
     "(A_ij/(2*m))*d[S]/dq_i*d[S]/dq_j - "
     "(hbar^2/(8*m))*(1/a)*d[a]/dq_i/dq_j*A_ij + (b_i/a)*d[S]/dq_i + c/a + "
     "d[S]/dt"},
    {"imag-part", "d[(a*A_ij/m)*d[S]/dq_i]/dq_j + d[a]/dt + d[b_i]/dq_i"},
    {"identity-real",
     "d[S]/dt + (1/(2*m))*(d[S]/dq_i)^2 - (hbar^2/(8*m))*(1/a)*d[a]/dq_i/dq_i "
     "+ (1/a)*b_i*d[S]/dq_i + c/a"},
    {"identity-imag", "d[a]/dt + d[(a/m)*d[S]/dq_i]/dq_i + d[b_i]/dq_i"},

    // --- Bohm identification a = R^2, b = R^2 Vv, c = R^2 V ------------------
    {"bohm-hj",
     "d[S]/dt + (1/(2*m))*(d[S]/dq_i)^2 - (hbar^2/(4*m))*(1/R)*d[d[R]/dq_i]/dq_i "
     "- (hbar^2/(4*m))*R^-2*(d[R]/dq_i)^2 + Vv_i*d[S]/dq_i + V"},
    {"bohm-continuity", "d[R^2]/dt + d[(R^2/m)*d[S]/dq_i]/dq_i"},
    {"half-form",
     "d[S]/dt + (1/(2*m))*(d[S]/dq_i)^2 + (1/2)*(QP + QK) + Vv_i*d[S]/dq_i + V"},
    {"qp-definition", "-(hbar^2/(2*m))*(1/R)*d[d[R]/dq_i]/dq_i"},
    {"qk-definition", "-(hbar^2/(2*m))*R^-2*(d[R]/dq_i)^2"},
    {"qpqk-divergence", "-(hbar^2/(2*m))*R^-2*d[R*d[R]/dq_i]/dq_i"},
    {"half-sum-laplacian", "-(hbar^2/(8*m))*R^-2*d[d[R^2]/dq_i]/dq_i"},
    {"hj-reference",
     "d[S]/dt + (1/(2*m))*(d[S]/dq_i)^2 - (hbar^2/(2*m))*(1/R)*d[d[R]/dq_i]/dq_i "
     "+ V"},
    {"continuity-reference", "d[R^2]/dt + d[(R^2/m)*d[S]/dq_i]/dq_i"},

    // --- classical limit a = 1, A = identity, b = 0, c = V -------------------
    {"classical-hj", "d[S]/dt + (1/(2*m))*(d[S]/dq_i)^2 + V"},
    {"classical-continuity", "(1/m)*d[S]/dq_i/dq_i"},

    // --- relativistic template -----------------------------------------------
    {"rel-weyl",
     "c + (1/2)*(b_mu*p^mu + p^mu*b_mu) + (1/4)*a*p^mu*p_mu + "
     "(1/2)*p^mu*a*p_mu + (1/4)*p^mu*p_mu*a"},
    {"rel-cnumber",
     "c - b_mu*d[S]/dq^mu + (i*hbar/2)*d[b_mu]/dq^mu + "
     "a*d[S]/dq^mu*d[S]/dq_mu - i*hbar*a*d[S]/dq^mu/dq_mu - "
     "i*hbar*d[a]/dq^mu*d[S]/dq_mu - (hbar^2/4)*d[a]/dq^mu/dq_mu"},
    {"rel-real",
     "(1/(2*m))*d[S]/dq^mu*d[S]/dq_mu + c/alpha - "
     "(hbar^2/(8*m))*(1/alpha)*d[alpha]/dq^mu/dq_mu - "
     "(1/alpha)*b_mu*d[S]/dq^mu"},
    {"rel-imag", "d[b_mu]/dq^mu - (1/m)*d[alpha*d[S]/dq_mu]/dq^mu"},
    {"c-coefficient", "-(1/2)*m0*c_light^2*R^2"},
    {"kg-final",
     "(1/(2*m0))*d[S]/dq^mu*d[S]/dq_mu - (1/2)*m0*c_light^2 - "
     "(hbar^2/(4*m0))*(1/R)*d[d[R]/dq^mu]/dq_mu - "
     "(hbar^2/(4*m0))*R^-2*d[R]/dq^mu*d[R]/dq_mu"},
    {"kg-continuity", "d[R^2*d[S]/dq_mu]/dq^mu"},
    {"mass-shell", "d[S]/dq^mu*d[S]/dq_mu - m0^2*c_light^2"},
    {"kg-reference",
     "(1/(2*m0))*d[S]/dq^mu*d[S]/dq_mu - (1/2)*m0*c_light^2 - "
     "(hbar^2/(2*m0))*(1/R)*d[d[R]/dq^mu]/dq_mu"},

    // --- published variants, informational only ------------------------------
    {"reported-rel-cnumber",
     "2*c - 2*b_mu*d[S]/dq^mu - i*hbar*d[b_mu]/dq^mu + "
     "a*(d[S]/dq_mu*d[S]/dq^mu - i*hbar*d[S]/dq_mu/dq^mu) - "
     "i*hbar*d[a]/dq^mu*d[S]/dq_mu - (hbar^2/4)*d[a]/dq^mu/dq_mu"},
    {"reported-rel-real",
     "(1/(2*m))*d[S]/dq_mu*d[S]/dq^mu + 2*c*alpha^-1 - "
     "(hbar^2/(8*m))*alpha^-1*d[alpha]/dq^mu/dq_mu - "
     "2*alpha^-1*b_mu*d[S]/dq^mu"},
    {"reported-rel-imag", "d[b_mu]/dq^mu + (1/m)*d[alpha*d[S]/dq_mu]/dq^mu"},
    {"reported-c-halved", "-(1/4)*m0*c_light^2*R^2"},
    {"reported-c-printed", "-(1/4)*m0^2*c_light^2*R^2"},
};

inline std::string_view golden(std::string_view label) {
  for (const auto& g : kGoldens)
    if (g.label == label) return g.text;
  throw std::invalid_argument("unknown golden label: " + std::string(label));
}

}  // namespace qhj::derive
