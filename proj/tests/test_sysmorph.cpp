#include <gtest/gtest.h>

#include "support.hpp"

using namespace uqr;

namespace {

const QuantumGroup& group(const std::string& t) {
    static QuantumGroup a1("A1"), a2("A2"), b2("B2"), g2("G2");
    if (t == "A1") return a1;
    if (t == "A2") return a2;
    if (t == "B2") return b2;
    return g2;
}

FieldElement qe(const CartanDatum& c, Fraction e) { return c.q(e); }

Vector lowest(const BasedModule& b) { return b.component_lowest(0); }

} // namespace

TEST(Sysmorph, ThetaOnA1Fundamental) {
    const auto& g = group("A1");
    const auto& c = g.cartan();
    const auto b = based_irreducible(g, Weight{1});
    const auto th = make_theta(b);
    EXPECT_TRUE(th.bar_linear);
    EXPECT_EQ(th.apply(unit_vector(2, 0)), qe(c, Fraction(1, 4)) * unit_vector(2, 0));
    EXPECT_EQ(th.apply(unit_vector(2, 1)), qe(c, Fraction(-3, 4)) * unit_vector(2, 1));
}

TEST(Sysmorph, ThetaIsAnInvolution) {
    for (std::string t : {"A1", "A2", "B2"}) {
        const auto& g = group(t);
        const auto& c = g.cartan();
        for (std::size_t i = 0; i < c.rank(); ++i) {
            const auto th = make_theta(based_irreducible(g, c.fundamental(i)));
            const auto tt = compose(th, th);
            EXPECT_FALSE(tt.bar_linear);
            EXPECT_EQ(tt.matrix, Matrix::identity(tt.matrix.rows())) << t;
        }
    }
}

TEST(Sysmorph, JOnA1Fundamental) {
    const auto& g = group("A1");
    const auto& c = g.cartan();
    const auto b = based_irreducible(g, Weight{1});
    const auto J = make_J(b.module);
    Matrix want(2, 2);
    want(0, 0) = qe(c, Fraction(3, 4));
    want(1, 1) = qe(c, Fraction(-1, 4));
    EXPECT_EQ(J.matrix, want);
    EXPECT_EQ(make_J_transport(b).matrix, J.matrix);
}

TEST(Sysmorph, JCommutationPattern) {
    // J is diagonal on weight spaces, so J F_i = q^{j(mu - alpha_i) - j(mu)} F_i J on weight mu
    for (std::string t : {"A2", "B2"}) {
        const auto& g = group(t);
        const auto& c = g.cartan();
        const auto b = based_irreducible(g, c.fundamental(0) + c.fundamental(1));
        const auto J = make_J(b.module);
        EXPECT_TRUE(verify_compatibility(b.module, J, spec::j(c)).pass()) << t;
        EXPECT_EQ(make_J_transport(b).matrix, J.matrix) << t;
        for (std::size_t i = 0; i < c.rank(); ++i)
            for (std::size_t k = 0; k < b.module.dim(); ++k) {
                const Vector v = unit_vector(b.module.dim(), k);
                const Vector lhs = J.matrix * (b.module.F(i) * v);
                const Fraction e = j_exponent(c, b.module.weight(k) - c.simple_root(i)) - j_exponent(c, b.module.weight(k));
                const Vector rhs = qe(c, e) * (b.module.F(i) * (J.matrix * v));
                EXPECT_EQ(lhs, rhs);
            }
    }
}

TEST(Sysmorph, GammaSwapsExtremalVectors) {
    const auto& g = group("A1");
    const auto b = based_irreducible(g, Weight{1});
    const auto G = make_gamma(b);
    EXPECT_EQ(G.apply(unit_vector(2, 0)), unit_vector(2, 1));
    // Gamma(F b+) = C_Gamma(F) b- = -E K^{-1} b- = -q b+
    EXPECT_EQ(G.apply(unit_vector(2, 1)), -qe(g.cartan(), 1) * unit_vector(2, 0));
}

TEST(Sysmorph, LemmaIdentities) {
    for (std::string t : {"A1", "A2", "B2"}) {
        const auto& g = group(t);
        const auto& c = g.cartan();
        for (std::size_t i = 0; i < c.rank(); ++i) {
            const auto r = check_lemma_identities(based_irreducible(g, c.fundamental(i)));
            EXPECT_TRUE(r.pass()) << t << i << (r.pass() ? "" : r.counterexamples.front().where);
        }
    }
    const auto r = check_lemma_identities(based_irreducible(group("A1"), Weight{3}));
    EXPECT_TRUE(r.pass());
}

TEST(Sysmorph, BraidOperatorsOnA1Fundamental) {
    const auto& g = group("A1");
    const auto& m = g.irreducible(Weight{1}).module;
    for (int variant = 0; variant < 4; ++variant) {
        const Matrix T = braid_operator(m, 0, variant);
        // a monomial matrix exchanging the two weight lines, entries +-q^k
        EXPECT_TRUE(T(0, 0).is_zero() && T(1, 1).is_zero()) << variant;
        for (auto x : {T(0, 1), T(1, 0)}) {
            ASSERT_FALSE(x.is_zero());
            EXPECT_TRUE(x.is_laurent());
            EXPECT_TRUE(x.numerator().is_monomial()) << variant;
        }
    }
}

TEST(Sysmorph, BraidRelationsAndWeights) {
    const auto& g = group("A2");
    const auto& c = g.cartan();
    const int v = calibrated_braid_variant(g);
    EXPECT_EQ(v, 2);
    for (const Weight lam : {Weight{1, 0}, Weight{1, 1}}) {
        const auto& m = g.irreducible(lam).module;
        const Matrix T1 = braid_operator(m, 0, v), T2 = braid_operator(m, 1, v);
        EXPECT_EQ(T1 * T2 * T1, T2 * T1 * T2) << lam.str();
        for (std::size_t k = 0; k < m.dim(); ++k) {
            const auto w = m.weight_of(T1 * unit_vector(m.dim(), k));
            ASSERT_TRUE(w.has_value());
            EXPECT_EQ(*w, m.weight(k) - m.weight(k)[0] * c.simple_root(0));
        }
    }
    const auto& b2 = group("B2");
    const auto& m = b2.irreducible(Weight{1, 0}).module;
    const int vb = calibrated_braid_variant(b2);
    const Matrix S1 = braid_operator(m, 0, vb), S2 = braid_operator(m, 1, vb);
    EXPECT_EQ(S1 * S2 * S1 * S2, S2 * S1 * S2 * S1);
}

TEST(Sysmorph, Tw0SendsLowestToHighest) {
    for (std::string t : {"A1", "A2", "B2", "G2"}) {
        const auto& g = group(t);
        const auto& c = g.cartan();
        const auto b = based_irreducible(g, c.fundamental(0));
        const auto Tb = make_Tw0(b, Tw0Method::braid_product);
        const auto Tt = make_Tw0(b, Tw0Method::transport);
        EXPECT_EQ(Tb.matrix, Tt.matrix) << t;
        EXPECT_EQ(Tt.apply(lowest(b)), b.pins.front().second) << t;
        EXPECT_TRUE(verify_compatibility(b.module, Tt, spec::tw0(c)).pass()) << t;
        // rescaling the pin does not change a linear map
        for (const auto& z : rescaling_list(c))
            EXPECT_EQ(make_Tw0(based_irreducible(g, c.fundamental(0), z), Tw0Method::transport).matrix, Tt.matrix);
    }
}

TEST(Sysmorph, CompatibilityRejectsScaledColumn) {
    const auto& g = group("A2");
    const auto b = based_irreducible(g, Weight{1, 0});
    auto th = make_theta(b);
    EXPECT_TRUE(verify_compatibility(b.module, th, spec::theta(g.cartan())).pass());
    for (std::size_t r = 0; r < th.matrix.rows(); ++r) th.matrix(r, 1) = FieldElement(2) * th.matrix(r, 1);
    const auto rep = verify_compatibility(b.module, th, spec::theta(g.cartan()));
    EXPECT_FALSE(rep.pass());
    EXPECT_FALSE(rep.counterexamples.empty());
}

TEST(Sysmorph, IdentityAndBarTransport) {
    const auto& g = group("B2");
    const auto b = based_irreducible(g, Weight{1, 1});
    const auto id = transport(b.module, spec::identity(g.cartan()), {{b.pins[0].second, b.pins[0].second}});
    EXPECT_EQ(id.matrix, Matrix::identity(b.module.dim()));
    const auto bar = make_bar(b);
    for (const auto& v : b.global_basis()) EXPECT_EQ(bar.apply(v), v);
    // composite of two bar-linear maps is linear
    const auto bt = compose(bar, make_theta(b));
    EXPECT_FALSE(bt.bar_linear);
    EXPECT_TRUE(compose(bar, bar).matrix == Matrix::identity(b.module.dim()));
}

TEST(Sysmorph, TransportNeedsGeneratingPins) {
    const auto& g = group("A1");
    const auto& m = g.irreducible(Weight{2}).module;
    const Vector mid = unit_vector(3, 1);
    EXPECT_THROW((void)transport(m, spec::identity(g.cartan()), {{mid, mid}}), DomainError);
    // pins that are not highest weight are rejected when building a based module
    EXPECT_THROW((void)make_based(g, m, {{Weight{0}, mid}}), ConsistencyError);
}
