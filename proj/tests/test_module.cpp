#include <gtest/gtest.h>

#include "support.hpp"

using namespace uqr;

namespace {

const QuantumGroup& group(const std::string& t) {
    static QuantumGroup a1("A1"), a2("A2"), b2("B2"), g2("G2"), c3("C3");
    if (t == "A1") return a1;
    if (t == "A2") return a2;
    if (t == "B2") return b2;
    if (t == "G2") return g2;
    return c3;
}

FieldElement qq(const CartanDatum& c, Fraction e) { return c.q(e); }

} // namespace

TEST(Module, A1Fundamental) {
    const auto& irr = group("A1").irreducible(Weight{1});
    EXPECT_EQ(irr.module.dim(), 2u);
    EXPECT_EQ(irr.module.weight(0), Weight{1});
    EXPECT_EQ(irr.module.weight(1), Weight{-1});
}

TEST(Module, A2Fundamental) {
    const auto& g = group("A2");
    const auto& c = g.cartan();
    const auto& m = g.irreducible(Weight{1, 0}).module;
    ASSERT_EQ(m.dim(), 3u);
    const Weight w1 = c.fundamental(0);
    for (const auto& w : {w1, w1 - c.simple_root(0), w1 - c.simple_root(0) - c.simple_root(1)})
        EXPECT_EQ(m.multiplicity(w), 1u) << w.str();
}

TEST(Module, A1StringIdentity) {
    // E F^2 hw = [2] F hw in V_{2 omega}
    const auto& g = group("A1");
    const auto& irr = g.irreducible(Weight{2});
    const auto& m = irr.module;
    const Vector f1 = m.F(0) * irr.hw(), f2 = m.F(0) * f1;
    EXPECT_EQ(m.E(0) * f2, quantum_integer(2, 1, g.cartan().root_order()) * f1);
    // E F^{(n)} v = [lambda - n + 1] F^{(n-1)} v for lambda = 3
    const auto& m3 = g.irreducible(Weight{3}).module;
    for (int n = 1; n <= 3; ++n) {
        const Vector lhs = m3.E(0) * divided_power_apply(m3, 0, n, unit_vector(4, 0));
        const Vector rhs = quantum_integer(3 - n + 1, 1, 4) * divided_power_apply(m3, 0, n - 1, unit_vector(4, 0));
        EXPECT_EQ(lhs, rhs) << n;
    }
}

TEST(Module, DimensionsMatchWeylFormula) {
    for (std::string t : {"A2", "B2", "G2", "C3"}) {
        const auto& g = group(t);
        const auto& c = g.cartan();
        std::vector<Weight> ws;
        for (std::size_t i = 0; i < c.rank(); ++i) ws.push_back(c.fundamental(i));
        if (t == "A2") ws.push_back(Weight{2, 2});
        if (t == "B2") ws.push_back(Weight{1, 1});
        for (const auto& w : ws) EXPECT_EQ(g.irreducible(w).module.dim(), uqr::testing::weyl_dimension(c, w)) << t << w.str();
    }
}

TEST(Module, RelationsHoldOnEveryConstructedModule) {
    for (std::string t : {"A1", "A2", "B2", "G2"}) {
        const auto& g = group(t);
        const auto& c = g.cartan();
        std::vector<Weight> ws;
        for (std::size_t i = 0; i < c.rank(); ++i) {
            ws.push_back(c.fundamental(i));
            if (t != "G2") ws.push_back(2 * c.fundamental(i));
        }
        for (const auto& w : ws) {
            const auto r = check_module_relations(g.irreducible(w).module);
            EXPECT_TRUE(r.pass()) << t << w.str() << (r.pass() ? "" : r.counterexamples.front().where);
        }
        const auto& f = g.irreducible(c.fundamental(0)).module;
        EXPECT_TRUE(check_module_relations(tensor(f, f)).pass()) << t;
    }
}

TEST(Module, NonDominantRejected) {
    EXPECT_THROW((void)group("A1").irreducible(Weight{-1}), DomainError);
}

TEST(Module, TensorWeights) {
    const auto& g = group("A1");
    const auto& v = g.irreducible(Weight{1}).module;
    const Module vv = tensor(v, v);
    EXPECT_EQ(vv.dim(), 4u);
    EXPECT_EQ(vv.multiplicity(Weight{2}), 1u);
    EXPECT_EQ(vv.multiplicity(Weight{0}), 2u);
    EXPECT_EQ(vv.multiplicity(Weight{-2}), 1u);
    // Delta(E) = E (x) K + 1 (x) E: b- (x) b+ picks up K b+ = q b+, b+ (x) b- only the second term
    const Vector pm = unit_vector(4, 1), mp = unit_vector(4, 2);
    const auto& c = g.cartan();
    EXPECT_EQ(vv.E(0) * mp, qq(c, 1) * unit_vector(4, 0));
    EXPECT_EQ(vv.E(0) * pm, unit_vector(4, 0));
}

TEST(Module, TensorMultiplicitiesConvolve) {
    for (std::string t : {"A2", "B2"}) {
        const auto& g = group(t);
        const auto& c = g.cartan();
        const auto& a = g.irreducible(c.fundamental(0)).module;
        const auto& b = g.irreducible(c.fundamental(1)).module;
        const Module ab = tensor(a, b);
        for (const auto& [w, n] : uqr::testing::convolve(a, b)) EXPECT_EQ(ab.multiplicity(w), n) << t << w.str();
        // K_H acts by weight addition
        for (std::size_t k = 0; k < ab.dim(); ++k)
            EXPECT_EQ(ab.weight(k), a.weight(k / b.dim()) + b.weight(k % b.dim()));
    }
}

TEST(Module, HighestWeightVectorsA1) {
    const auto& g = group("A1");
    const auto& v = g.irreducible(Weight{1}).module;
    const Module vv = tensor(v, v);
    auto top = highest_weight_vectors(vv, Weight{2});
    ASSERT_EQ(top.size(), 1u);
    EXPECT_TRUE(is_zero(top[0] - top[0][0] * unit_vector(4, 0)));
    auto zero = highest_weight_vectors(vv, Weight{0});
    ASSERT_EQ(zero.size(), 1u);
    // proportional to b- (x) b+ + c b+ (x) b- with c = -q
    const Vector h = zero[0];
    ASSERT_FALSE(h[2].is_zero());
    EXPECT_EQ(h[1] / h[2], -qq(g.cartan(), 1));
    for (const auto& w : {Weight{1}, Weight{3}}) {
        const auto& m = g.irreducible(w).module;
        EXPECT_EQ(highest_weight_vectors(m, w).size(), 1u);
    }
}

TEST(Module, IsotypicDecompositions) {
    const auto& a1 = group("A1");
    const auto& v = a1.irreducible(Weight{1}).module;
    const auto d = isotypic_decomposition(a1, tensor(v, v));
    EXPECT_EQ(d.multiplicities(), (std::map<Weight, std::size_t>{{Weight{0}, 1}, {Weight{2}, 1}}));
    const auto& a2 = group("A2");
    const Module m = tensor(a2.irreducible(Weight{1, 0}).module, a2.irreducible(Weight{0, 1}).module);
    const auto d2 = isotypic_decomposition(a2, m);
    EXPECT_EQ(d2.multiplicities(), (std::map<Weight, std::size_t>{{Weight{0, 0}, 1}, {Weight{1, 1}, 1}}));
    std::size_t total = 0;
    for (const auto& comp : d2.components) {
        total += comp.embedding.cols();
        EXPECT_EQ(comp.embedding.cols(), a2.irreducible(comp.nu).module.dim());
    }
    EXPECT_EQ(total, 9u);
    // the top tensor is its own projection onto the top component
    const Vector top = unit_vector(9, 0);
    EXPECT_EQ(d2.project(top, Weight{1, 1}), top);
}

TEST(Module, ComponentsAreIntertwined) {
    // the embedding of each component is a module map from V_nu
    const auto& g = group("A2");
    const auto& adj = g.irreducible(Weight{1, 1}).module;
    const Module m = tensor(g.irreducible(Weight{1, 0}).module, adj);
    const auto d = isotypic_decomposition(g, m);
    for (const auto& comp : d.components) {
        const auto& vn = g.irreducible(comp.nu).module;
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_EQ(m.E(i) * comp.embedding, comp.embedding * vn.E(i));
            EXPECT_EQ(m.F(i) * comp.embedding, comp.embedding * vn.F(i));
        }
    }
    // projectors are idempotent and sum to one
    Matrix sum(m.dim(), m.dim());
    for (const auto& [nu, n] : d.multiplicities()) {
        const Matrix P = d.projector(nu);
        EXPECT_EQ(P * P, P);
        sum = sum + P;
    }
    EXPECT_EQ(sum, Matrix::identity(m.dim()));
}

TEST(Module, DividedPowers) {
    const auto& g = group("A1");
    const auto& m = g.irreducible(Weight{2}).module;
    EXPECT_EQ(divided_power(m, 0, 0, false), Matrix::identity(3));
    EXPECT_EQ(divided_power(m, 0, 1, false), m.F(0));
    // basis {hw, F hw, F^{(2)} hw}: F^{(2)} hw is the last element of that basis
    const Vector hw = unit_vector(3, 0);
    const Vector f2 = divided_power_apply(m, 0, 2, hw);
    std::vector<Vector> basis = {hw, m.F(0) * hw, f2};
    const Matrix B = Matrix::from_columns(basis, 3);
    const Vector coords = inverse(B) * f2;
    EXPECT_EQ(coords, unit_vector(3, 2));
}
