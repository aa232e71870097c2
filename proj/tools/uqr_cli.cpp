// uqr: compute R-matrices, crystals and global bases; run verification suites.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uqr/uqr.hpp"

namespace {

using namespace uqr;
using io::Json;

// Config errors leave with exit code 2, internal inconsistencies with 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Weight parse_weight(const std::string& s, const CartanDatum& c) {
    std::vector<std::int64_t> coords;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            coords.push_back(std::stoll(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse weight '" + s + "'");
        }
    }
    if (coords.size() != c.rank())
        throw ConfigError("weight '" + s + "' has " + std::to_string(coords.size()) + " coordinates, rank is " +
                          std::to_string(c.rank()));
    Weight w(std::move(coords));
    if (!w.is_dominant()) throw ConfigError("weight not dominant: " + w.str());
    return w;
}

CartanDatum parse_type(const std::string& t) {
    try {
        CartanDatum c = CartanDatum::of_type(t);
        if (!c.is_finite()) throw ConfigError("type " + t + " is not of finite type");
        return c;
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

// Writes to path, or stdout when path is empty; with a golden file, compares
// against it (or creates it when absent).
int emit(const std::string& text, const std::string& out, const std::string& golden, bool update_golden) {
    if (!out.empty())
        io::write_file(out, text);
    else if (golden.empty())
        std::cout << text;
    if (golden.empty()) return 0;
    const auto existing = io::read_file(golden);
    if (!existing || update_golden) {
        io::write_file(golden, text);
        std::cout << "golden written: " << golden << "\n";
        return 0;
    }
    if (*existing != text) {
        std::cerr << "output differs from golden file " << golden << "\n";
        return 1;
    }
    std::cout << "golden match: " << golden << "\n";
    return 0;
}

std::string table(const Matrix& m) {
    std::vector<std::vector<std::string>> cells(m.rows(), std::vector<std::string>(m.cols()));
    std::vector<std::size_t> width(m.cols(), 1);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            cells[r][c] = m(r, c).str();
            width[c] = std::max(width[c], cells[r][c].size());
        }
    std::string s;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "  " : "") + row[c] + std::string(width[c] - row[c].size(), ' ');
        s += "\n";
    }
    return s;
}

struct Common {
    std::string type = "A1";
    std::string out, golden;
    bool update_golden = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--type", c.type, "Cartan type: A1, A2, B2, C3, D4, G2, ...")->capture_default_str();
    cmd->add_option("--out", c.out, "output file (stdout when omitted)");
    cmd->add_option("--golden", c.golden, "compare output with this file, creating it when absent");
    cmd->add_flag("--update-golden", c.update_golden, "overwrite the golden file");
}

// compute-r

struct ComputeOpts {
    Common common;
    std::vector<std::string> hw;
    std::string method = "theta";
    bool show_table = false;
};

int cmd_compute(const ComputeOpts& o) {
    const CartanDatum c = parse_type(o.common.type);
    if (o.hw.size() != 2) throw ConfigError("compute-r needs exactly two --hw weights");
    const Weight lambda = parse_weight(o.hw[0], c), mu = parse_weight(o.hw[1], c);
    const std::vector<std::string> all = {"theta", "krls", "oracle"};
    std::vector<std::string> methods;
    if (o.method == "all")
        methods = all;
    else if (std::find(all.begin(), all.end(), o.method) != all.end())
        methods = {o.method};
    else
        throw ConfigError("unknown method '" + o.method + "'");
    QuantumGroup g(c);
    const auto X = based_irreducible(g, lambda), Y = based_irreducible(g, mu);
    std::vector<Matrix> rs;
    Json results = Json::array();
    for (const auto& m : methods) {
        Matrix R = m == "theta" ? r_theta(X, Y)
                   : m == "krls" ? r_krls(X, Y, Tw0Method::braid_product)
                                 : r_oracle(X.module, Y.module);
        results.push_back(io::rmatrix_json(m, X.module, Y.module, lambda, mu, R));
        rs.push_back(std::move(R));
    }
    bool agree = true;
    for (const auto& R : rs) agree = agree && R == rs.front();
    const Json doc = methods.size() == 1 ? results.front() : Json{{"agree", agree}, {"results", results}};
    if (o.show_table) std::cout << table(rs.front());
    const int rc = emit(io::dump(doc), o.common.out, o.common.golden, o.common.update_golden);
    if (!agree) {
        std::cerr << "methods disagree\n";
        return 1;
    }
    return rc;
}

// verify

struct VerifyOpts {
    Common common;
    std::vector<std::string> suites = {"all"};
    std::vector<std::string> hw;
    int max_hw = 0;
    std::vector<std::string> triple;
    std::string fault = "none";
    std::string report_dir = "verify-reports";
};

const std::vector<std::string> kSuites = {"module-relations", "crystal-crossval", "method-agreement",
                                          "lemma-identities", "gamma-lemma",      "scaling",
                                          "hexagon",          "ybe",              "commutor"};

std::vector<Weight> weights_up_to(const CartanDatum& c, int max) {
    std::vector<Weight> out;
    std::function<void(std::size_t, Weight, int)> rec = [&](std::size_t i, Weight w, int left) {
        if (i == c.rank()) {
            if (!w.is_zero()) out.push_back(w);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            Weight x = w;
            x[i] = k;
            rec(i + 1, x, left - k);
        }
    };
    rec(0, c.zero(), max);
    std::sort(out.begin(), out.end(), [&](const Weight& a, const Weight& b) {
        std::int64_t sa = 0, sb = 0;
        for (std::size_t i = 0; i < c.rank(); ++i) sa += a[i], sb += b[i];
        return sa != sb ? sa < sb : b < a;
    });
    return out;
}

std::string file_safe(std::string s) {
    for (auto& ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
    return s;
}

int cmd_verify(const VerifyOpts& o) {
    const CartanDatum c = parse_type(o.common.type);
    const auto fault = parse_fault(o.fault);
    if (!fault) throw ConfigError("unknown fault '" + o.fault + "'");
    std::vector<std::string> suites;
    for (const auto& s : o.suites) {
        if (s == "all")
            suites.insert(suites.end(), kSuites.begin(), kSuites.end());
        else if (std::find(kSuites.begin(), kSuites.end(), s) != kSuites.end())
            suites.push_back(s);
        else
            throw ConfigError("unknown suite '" + s + "'");
    }
    std::vector<Weight> ws;
    for (const auto& s : o.hw) ws.push_back(parse_weight(s, c));
    if (o.max_hw > 0)
        for (auto& w : weights_up_to(c, o.max_hw))
            if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
    std::vector<Weight> triple;
    for (const auto& s : o.triple) triple.push_back(parse_weight(s, c));
    if (!triple.empty() && triple.size() != 3) throw ConfigError("--triple takes three weights");
    if (ws.empty() && triple.empty())
        for (std::size_t i = 0; i < c.rank(); ++i) ws.push_back(c.fundamental(i));
    if (ws.empty()) ws = triple;

    QuantumGroup g(c);
    const BraidingFn sigma = braiding_fn(*fault);
    std::vector<std::pair<std::string, std::function<CheckReport()>>> jobs;
    auto based = [&g](const Weight& w) { return based_irreducible(g, w); };
    for (const auto& suite : suites) {
        if (suite == "module-relations")
            for (const auto& w : ws)
                jobs.push_back({suite, [&g, w] {
                                    auto r = check_module_relations(g.irreducible(w).module);
                                    r.name = "module-relations" + w.str();
                                    return r;
                                }});
        if (suite == "crystal-crossval")
            for (const auto& a : ws)
                for (const auto& b : ws)
                    jobs.push_back({suite, [&g, a, b] { return crystal_crossval(g, a, b, calibrated_rule(g)); }});
        if (suite == "method-agreement")
            for (const auto& a : ws)
                for (const auto& b : ws)
                    jobs.push_back({suite, [&g, a, b, f = *fault] { return check_method_agreement(g, a, b, nullptr, f); }});
        if (suite == "lemma-identities")
            for (const auto& w : ws)
                jobs.push_back({suite, [based, w] {
                                    auto r = check_lemma_identities(based(w));
                                    r.name += w.str();
                                    return r;
                                }});
        if (suite == "gamma-lemma")
            for (const auto& a : ws)
                for (const auto& b : ws)
                    jobs.push_back({suite, [based, a, b] {
                                        auto r = check_gamma_lemma(based(a), based(b));
                                        r.name += a.str() + b.str();
                                        return r;
                                    }});
        if (suite == "scaling")
            for (const auto& w : ws) jobs.push_back({suite, [&g, w] { return check_theta_scaling(g, w); }});
        if (suite == "hexagon") {
            std::vector<std::vector<Weight>> triples;
            if (!triple.empty())
                triples.push_back(triple);
            else {
                // keep the default sweep at desk scale: factors of weight height at most 2
                std::vector<Weight> small;
                for (const auto& w : ws) {
                    std::int64_t s = 0;
                    for (std::size_t i = 0; i < c.rank(); ++i) s += w[i];
                    if (s <= 2) small.push_back(w);
                }
                for (const auto& a : small)
                    for (const auto& b : small)
                        for (const auto& d : small) triples.push_back({a, b, d});
            }
            for (const auto& t : triples)
                jobs.push_back({suite, [based, t, sigma] {
                                    auto r = check_hexagon(based(t[0]), based(t[1]), based(t[2]), sigma);
                                    r.name += t[0].str() + t[1].str() + t[2].str();
                                    return r;
                                }});
        }
        if (suite == "ybe")
            for (const auto& w : ws)
                jobs.push_back({suite, [based, w, sigma] {
                                    auto r = check_ybe(based(w), sigma);
                                    r.name += w.str();
                                    return r;
                                }});
        if (suite == "commutor")
            for (const auto& a : ws)
                for (const auto& b : ws)
                    jobs.push_back({suite, [based, a, b, f = *fault] {
                                        const auto X = based(a), Y = based(b);
                                        const Matrix m = f == Fault::identity_system
                                                             ? flip_matrix(X.module.dim(), Y.module.dim())
                                                             : braiding(X, Y, f);
                                        return check_intertwiner("commutor" + a.str() + b.str(), m,
                                                                 tensor(X.module, Y.module), tensor(Y.module, X.module));
                                    }});
    }

    std::filesystem::create_directories(o.report_dir);
    std::vector<std::future<CheckReport>> futures;
    for (auto& [suite, job] : jobs) futures.push_back(std::async(std::launch::async, job));
    bool all_pass = true;
    std::size_t k = 0;
    std::mutex out_mu;
    for (auto& f : futures) {
        const CheckReport r = f.get();
        const std::string path =
            (std::filesystem::path(o.report_dir) / (std::to_string(k) + "-" + file_safe(r.name) + ".json")).string();
        io::write_file(path, io::dump(io::to_json(r)));
        std::lock_guard<std::mutex> lock(out_mu);
        std::cout << (r.pass() ? "PASS " : "FAIL ") << jobs[k].first << ": " << r.name;
        if (!r.pass()) std::cout << "  counterexample: " << r.counterexamples.front().where;
        std::cout << "\n";
        all_pass = all_pass && r.pass();
        ++k;
    }
    std::cout << (all_pass ? "all checks passed" : "some checks failed") << " (" << jobs.size() << " checks, reports in "
              << o.report_dir << ")\n";
    return all_pass ? 0 : 1;
}

// crystal

struct CrystalOpts {
    Common common;
    std::string hw;
    std::vector<std::string> tensor_hw;
    bool list_hw = false;
};

int cmd_crystal(const CrystalOpts& o) {
    const CartanDatum c = parse_type(o.common.type);
    QuantumGroup g(c);
    if (!o.tensor_hw.empty()) {
        if (o.tensor_hw.size() != 2) throw ConfigError("--tensor takes two weights");
        const Weight a = parse_weight(o.tensor_hw[0], c), b = parse_weight(o.tensor_hw[1], c);
        const auto& ba = bases_of(g, a);
        const auto& bb = bases_of(g, b);
        if (!o.list_hw) {
            const auto t = tensor_crystal(ba.crystal, bb.crystal, calibrated_rule(g), c);
            return emit(io::crystal_dot(t), o.common.out, o.common.golden, o.common.update_golden);
        }
        Json comps = Json::array();
        for (const auto& [nu, mult] : tensor_pair(g, a, b).iso.multiplicities()) {
            Json verts = Json::array();
            for (auto v : highest_weight_set(g, a, b, nu))
                verts.push_back({{"vertex", v}, {"weight", io::to_json(bb.crystal.weights[v])}});
            comps.push_back({{"nu", io::to_json(nu)}, {"multiplicity", mult}, {"S", verts}});
        }
        const Json doc = {{"cartan", io::to_json(c)},
                          {"lambda", io::to_json(a)},
                          {"mu", io::to_json(b)},
                          {"rule", rule_name(calibrated_rule(g))},
                          {"components", comps}};
        return emit(io::dump(doc), o.common.out, o.common.golden, o.common.update_golden);
    }
    if (o.hw.empty()) throw ConfigError("crystal needs --hw or --tensor");
    const Weight w = parse_weight(o.hw, c);
    return emit(io::crystal_dot(bases_of(g, w).crystal), o.common.out, o.common.golden, o.common.update_golden);
}

// canonical-basis

struct BasisOpts {
    Common common;
    std::string hw;
};

int cmd_basis(const BasisOpts& o) {
    const CartanDatum c = parse_type(o.common.type);
    if (o.hw.empty()) throw ConfigError("canonical-basis needs --hw");
    const Weight w = parse_weight(o.hw, c);
    QuantumGroup g(c);
    const auto& irr = g.irreducible(w);
    const auto& b = bases_of(g, w);
    const auto rep = certify_global_basis(irr, b);
    if (!rep.pass()) throw ConsistencyError("global basis certification failed: " + rep.counterexamples.front().where);
    return emit(io::dump(io::global_basis_json(irr, b)), o.common.out, o.common.golden, o.common.update_golden);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact R-matrices, crystals and global bases for quantum groups of finite type"};
    app.require_subcommand(1);

    ComputeOpts co;
    auto* compute = app.add_subcommand("compute-r", "R-matrix on V_lambda (x) V_mu");
    add_common(compute, co.common);
    compute->add_option("--hw", co.hw, "highest weight, comma-separated fundamental coordinates (give twice)")->required();
    compute->add_option("--method", co.method, "theta, krls, oracle or all")->capture_default_str();
    compute->add_flag("--table", co.show_table, "also print an aligned table of the first matrix");

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify, vo.common);
    verify->add_option("--suite", vo.suites, "suite name or all")->capture_default_str();
    verify->add_option("--hw", vo.hw, "highest weights to test");
    verify->add_option("--max-hw", vo.max_hw, "also test every dominant weight with coordinate sum up to N");
    verify->add_option("--triple", vo.triple, "three weights for the hexagon suite")->expected(3);
    verify->add_option("--inject-fault", vo.fault, "none, theta-sign, scale-block, wrong-flip, identity-system")
        ->capture_default_str();
    verify->add_option("--report-dir", vo.report_dir, "directory for CheckReport JSON files")->capture_default_str();

    CrystalOpts cro;
    auto* crystal = app.add_subcommand("crystal", "crystal graph of V_lambda or of a tensor product");
    add_common(crystal, cro.common);
    crystal->add_option("--hw", cro.hw, "highest weight");
    crystal->add_option("--tensor", cro.tensor_hw, "two highest weights")->expected(2);
    crystal->add_flag("--list-hw", cro.list_hw, "list the highest-weight sets of the tensor product");

    BasisOpts bo;
    auto* basis = app.add_subcommand("canonical-basis", "global basis of V_lambda as JSON");
    add_common(basis, bo.common);
    basis->add_option("--hw", bo.hw, "highest weight")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*compute) return cmd_compute(co);
        if (*verify) return cmd_verify(vo);
        if (*crystal) return cmd_crystal(cro);
        if (*basis) return cmd_basis(bo);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ConsistencyError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return 0;
}
