#pragma once

#include "k3q/catalogue.hpp"
#include "k3q/potentials.hpp"
#include "k3q/qseries.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3q {

// ---------------------------------------------------------------------------
// Degeneration to the normal cone of a smooth elliptic fiber: the genus-two
// divisibility-two computation with both point insertions on the bubble.
//
// Each splitting pairs a relative (S, E) series with a combination of
// relative (P^1 x E, E) series dual along the divisor; the combinatorial
// factor collects prod(mu_i)/l! together with the profile orderings and
// the disconnected-bubble multiplicities.
// ---------------------------------------------------------------------------

struct BubbleFactor {
    Rational coeff;
    catalogue::RelP1EKey key;
};

struct DegenerationSplitting {
    catalogue::RelProfile left;  // profile on (S, E)
    std::vector<BubbleFactor> right;
};

struct DegenerationPlan {
    std::vector<DegenerationSplitting> splittings;
};

// The one catalogued plan: F_{2,2}(t0(p)^2) with both points on the bubble.
// A profile consisting solely of point classes on the (S, E) side never
// appears: its contribution vanishes.
inline DegenerationPlan f22_plan() {
    using catalogue::RelP1EKey;
    using catalogue::RelProfile;
    DegenerationPlan plan;
    plan.splittings.push_back({RelProfile{{1, false}, {1, true}},
                               {{Rational(4), RelP1EKey{1, 1, 1, {{1, true}}}}}});
    plan.splittings.push_back({RelProfile{{2, false}},
                               {{Rational(2), RelP1EKey{1, 2, 2, {{2, true}}}}}});
    plan.splittings.push_back({RelProfile{{1, false}, {1, false}},
                               {{rat(1, 2), RelP1EKey{1, 2, 2, {{1, true}, {1, true}}}},
                                {Rational(2), RelP1EKey{2, 1, 2, {{1, true}}}}}});
    return plan;
}

// Genus-two, divisibility-two series with two point insertions, assembled
// from the degeneration plan; exact through q^N. The genus-one primitive
// F_{1,1}(t0(p)) is injectable so the mutation test can perturb it.
inline QSeries assemble_f22_from(const QSeries& f11_primitive, long long N) {
    std::optional<QSeries> f12 =
        apply_mcf(f11_primitive, 1, 2, {tau(0, InsClass::point())});
    QSeries acc = QSeries::zero(-2, N);
    for (const auto& split : f22_plan().splittings) {
        QSeries left = catalogue::rel_SE(split.left, N + 2, f12);
        QSeries bubble = QSeries::zero(0, N + 2);
        for (const auto& factor : split.right)
            bubble = add(bubble, scalar_mul(factor.coeff, catalogue::rel_P1E(factor.key, N + 2)));
        acc = add(acc, mul(left, bubble));
    }
    return acc.truncated(N);
}

inline QSeries assemble_f22(long long N) {
    long long inner = 2 * (N + 4);
    return assemble_f22_from(catalogue::f11_p(inner), N);
}

struct CrossCheck {
    bool ok = true;
    std::optional<long long> mismatch_exponent;
};

// Degeneration output against the multiple cover transform of the primitive
// genus-two series (D_q C2)^2 / Delta; equality through q^N.
inline CrossCheck crosscheck_mcf(long long N) {
    QSeries via_degeneration = assemble_f22(N);
    QSeries via_mcf = catalogue::f22_pp(N);
    CrossCheck out;
    out.mismatch_exponent = first_mismatch(via_degeneration, via_mcf);
    out.ok = !out.mismatch_exponent.has_value();
    return out;
}

}  // namespace k3q
