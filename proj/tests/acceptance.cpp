// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <future>

#include "uqr/uqr.hpp"

using namespace uqr;

namespace {

struct Case {
    const QuantumGroup* g;
    std::vector<Weight> weights; // the irreducibles of criterion 1
};

std::vector<Case>& cases() {
    static QuantumGroup a1("A1"), a2("A2"), b2("B2");
    static std::vector<Case> c = {
        {&a1, {Weight{1}, Weight{2}, Weight{3}}},
        {&a2, {Weight{1, 0}, Weight{0, 1}, Weight{1, 1}}},
        {&b2, {Weight{1, 0}, Weight{0, 1}}},
    };
    return c;
}

struct Pair {
    const QuantumGroup* g;
    Weight lambda, mu;
    std::string str() const { return g->cartan().label() + " " + lambda.str() + "x" + mu.str(); }
};

std::vector<Pair> pairs() {
    std::vector<Pair> out;
    for (const auto& c : cases())
        for (const auto& a : c.weights)
            for (const auto& b : c.weights) out.push_back({c.g, a, b});
    return out;
}

/// Collected failures of one criterion; empty means pass.
struct Outcome {
    std::vector<std::string> failures;
    std::size_t checked = 0;

    void need(bool ok, const std::string& what) {
        ++checked;
        if (!ok) failures.push_back(what);
    }
    void need(const CheckReport& r, const std::string& what) {
        ++checked;
        if (!r.pass()) failures.push_back(what + ": " + r.counterexamples.front().where);
    }
    void merge(Outcome o) {
        checked += o.checked;
        for (auto& f : o.failures) failures.push_back(std::move(f));
    }
};

template <class T, class F>
Outcome over(const std::vector<T>& items, F body) {
    std::vector<std::future<Outcome>> jobs;
    for (const auto& it : items)
        jobs.push_back(std::async(std::launch::async, [&body, &it] {
            Outcome o;
            try {
                body(it, o);
            } catch (const std::exception& e) {
                o.failures.push_back(std::string("exception: ") + e.what());
            }
            return o;
        }));
    Outcome all;
    for (auto& j : jobs) all.merge(j.get());
    return all;
}

struct Module1 {
    const QuantumGroup* g;
    Weight lambda;
};

std::vector<Module1> irreducibles() {
    std::vector<Module1> out;
    for (const auto& c : cases())
        for (const auto& w : c.weights) out.push_back({c.g, w});
    return out;
}

Outcome criterion1() {
    return over(pairs(), [](const Pair& p, Outcome& o) {
        // the oracle throws unless its triangular system has a unique solution
        o.need(check_method_agreement(*p.g, p.lambda, p.mu), p.str());
    });
}

Outcome criterion2() {
    struct Triple {
        const QuantumGroup* g;
        Weight u, v, w;
    };
    std::vector<Triple> ts;
    const auto& cs = cases();
    const std::vector<std::pair<const QuantumGroup*, std::vector<Weight>>> sets = {
        {cs[0].g, {Weight{1}, Weight{2}}}, {cs[1].g, {Weight{1, 0}, Weight{0, 1}}}};
    for (const auto& [g, ws] : sets)
        for (const auto& u : ws)
            for (const auto& v : ws)
                for (const auto& w : ws) ts.push_back({g, u, v, w});
    return over(ts, [](const Triple& t, Outcome& o) {
        const auto U = based_irreducible(*t.g, t.u), V = based_irreducible(*t.g, t.v), W = based_irreducible(*t.g, t.w);
        o.need(check_hexagon(U, V, W), t.g->cartan().label() + " " + t.u.str() + t.v.str() + t.w.str());
    });
}

Outcome criterion3() {
    const auto& cs = cases();
    const std::vector<Module1> vs = {
        {cs[0].g, Weight{1}}, {cs[0].g, Weight{2}}, {cs[1].g, Weight{1, 0}}, {cs[2].g, Weight{0, 1}}};
    return over(vs, [](const Module1& m, Outcome& o) {
        o.need(check_ybe(based_irreducible(*m.g, m.lambda)), m.g->cartan().label() + " " + m.lambda.str());
    });
}

Outcome criterion4() {
    Outcome o = over(irreducibles(), [](const Module1& m, Outcome& o) {
        o.need(check_lemma_identities(based_irreducible(*m.g, m.lambda)), m.g->cartan().label() + " " + m.lambda.str());
    });
    o.merge(over(pairs(), [](const Pair& p, Outcome& o) {
        o.need(check_gamma_lemma(based_irreducible(*p.g, p.lambda), based_irreducible(*p.g, p.mu)), p.str());
    }));
    return o;
}

Outcome criterion5() {
    return over(pairs(), [](const Pair& p, Outcome& o) {
        const auto X = based_irreducible(*p.g, p.lambda), Y = based_irreducible(*p.g, p.mu);
        o.need(check_normalization_row(X, Y, r_theta(X, Y)), p.str());
    });
}

Outcome criterion6() {
    Outcome o = over(pairs(), [](const Pair& p, Outcome& o) {
        const auto& g = *p.g;
        auto text = [&](const BasedModule& X, const BasedModule& Y) {
            return io::dump(io::rmatrix_json("theta", X.module, Y.module, p.lambda, p.mu, r_theta(X, Y)));
        };
        const std::string ref = text(based_irreducible(g, p.lambda), based_irreducible(g, p.mu));
        for (const auto& z : rescaling_list(g.cartan())) {
            o.need(text(based_irreducible(g, p.lambda, z), based_irreducible(g, p.mu)) == ref,
                   p.str() + " left pin * " + z.str());
            o.need(text(based_irreducible(g, p.lambda), based_irreducible(g, p.mu, z)) == ref,
                   p.str() + " right pin * " + z.str());
        }
    });
    o.merge(over(irreducibles(), [](const Module1& m, Outcome& o) {
        o.need(check_theta_scaling(*m.g, m.lambda), m.g->cartan().label() + " " + m.lambda.str());
    }));
    return o;
}

Outcome criterion7() {
    return over(irreducibles(), [](const Module1& m, Outcome& o) {
        const auto& irr = m.g->irreducible(m.lambda);
        const auto& b = bases_of(*m.g, m.lambda);
        const std::string at = m.g->cartan().label() + " " + m.lambda.str();
        o.need(certify_global_basis(irr, b), at);
        if (m.g->cartan().label() == "A1") {
            // G(b) = F^{(k)} hw for each k
            for (std::int64_t k = 0; k <= m.lambda[0]; ++k) {
                const Vector want = divided_power_apply(irr.module, 0, k, irr.hw());
                bool found = false;
                for (const auto& v : b.global) found = found || v == want;
                o.need(found, at + " divided power " + std::to_string(k));
            }
        }
    });
}

Outcome criterion8() {
    return over(pairs(), [](const Pair& p, Outcome& o) {
        o.need(crystal_crossval(*p.g, p.lambda, p.mu, calibrated_rule(*p.g)), p.str());
        const auto& pair = tensor_pair(*p.g, p.lambda, p.mu);
        for (const auto& [nu, n] : pair.iso.multiplicities())
            o.need(highest_weight_set(*p.g, p.lambda, p.mu, nu).size() == n, p.str() + " |S^" + nu.str() + "|");
    });
}

Outcome criterion9() {
    Outcome o = over(irreducibles(), [](const Module1& m, Outcome& o) {
        const std::string at = m.g->cartan().label() + " " + m.lambda.str();
        o.need(check_module_relations(m.g->irreducible(m.lambda).module), at);
        const auto b = based_irreducible(*m.g, m.lambda);
        o.need(make_Tw0(b, Tw0Method::braid_product).matrix == make_Tw0(b, Tw0Method::transport).matrix, at + " T_w0");
    });
    o.merge(over(pairs(), [](const Pair& p, Outcome& o) {
        o.need(check_module_relations(tensor_pair(*p.g, p.lambda, p.mu).module), p.str());
    }));
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto& a1 = *cases()[0].g;
    const auto V = based_irreducible(a1, Weight{1}), W = based_irreducible(a1, Weight{2});
    auto detected = [&](const CheckReport& r, const std::string& what) {
        o.need(!r.pass() && !r.counterexamples.front().where.empty(), what);
    };
    detected(check_method_agreement(a1, Weight{1}, Weight{1}, nullptr, Fault::theta_sign), "theta-sign (agreement)");
    detected(check_hexagon(V, W, V, braiding_fn(Fault::theta_sign)), "theta-sign (hexagon)");
    detected(check_ybe(V, braiding_fn(Fault::scale_block)), "scale-block (ybe)");
    detected(check_hexagon(V, V, V, braiding_fn(Fault::scale_block)), "scale-block (hexagon)");
    detected(check_ybe(V, braiding_fn(Fault::wrong_flip)), "wrong-flip (ybe)");
    const auto& a2 = *cases()[1].g;
    detected(check_ybe(based_irreducible(a2, Weight{1, 0}), braiding_fn(Fault::wrong_flip)), "wrong-flip (A2 ybe)");
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"three-way R agreement on all acceptance pairs", criterion1},
        {"hexagon on all A1 and A2 triples", criterion2},
        {"Yang-Baxter on V (x) V (x) V", criterion3},
        {"Gamma/Theta/J/T_w0 identities and Gamma lemma", criterion4},
        {"normalization row R(b_lambda (x) c)", criterion5},
        {"scaling independence", criterion6},
        {"global basis certification", criterion7},
        {"crystal cross-validation and |S^nu|", criterion8},
        {"module relations and T_w0 methods", criterion9},
        {"injected faults detected", criterion10},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = o.failures.empty() && o.checked > 0;
        failed += ok ? 0 : 1;
        std::printf("[%s] criterion %zu: %s (%zu checks, tolerance: exact, %.1fs)\n", ok ? "PASS" : "FAIL", k + 1,
                    criteria[k].first.c_str(), o.checked, s);
        for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
