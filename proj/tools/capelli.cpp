#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capelli/center.hpp"
#include "capelli/modules.hpp"
#include "capelli/phi.hpp"
#include "capelli/report.hpp"
#include "capelli/rng.hpp"
#include "capelli/textform.hpp"

using namespace capelli;
using Clock = std::chrono::steady_clock;

namespace {

struct Common {
    int m = 1;
    int n = 1;
    std::string r_text = "zero";
    std::uint64_t seed = 5;
    bool json = false;
    std::string out;
};

int config_error(const std::string& msg) {
    std::cerr << "config error: " << msg << "\n";
    return 2;
}

int emit(RunReport& rep, const Common& c, Clock::time_point t0) {
    rep.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    std::string body = c.json ? rep.json() : rep.text();
    if (!c.out.empty()) {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) return config_error("cannot open " + c.out);
        f << body;
    } else {
        std::cout << body;
    }
    return rep.all_pass() ? 0 : 1;
}

std::optional<PhiContext<Rat>> build_context(const Common& c, std::string& err) {
    if (c.m < 0 || c.n < 0) {
        err = "ranks must be nonnegative";
        return std::nullopt;
    }
    Alg hat{c.m + 1, c.n, 0};
    if (c.r_text == "r1" && c.m + 1 == c.n) {
        err = "the canonical twist r1 needs m+1 != n";
        return std::nullopt;
    }
    try {
        return phi_context(hat, parse_twist(hat, c.r_text));
    } catch (const std::exception& e) {
        err = e.what();
        return std::nullopt;
    }
}

std::string gen_text(const Alg& g, int id) {
    return "e(" + std::to_string(gen_row(g, id)) + "," + std::to_string(gen_col(g, id)) + ")";
}

std::string join_rats(const std::vector<Rat>& v) {
    std::string s;
    for (const Rat& r : v) {
        if (!s.empty()) s += ",";
        s += rat_text(r);
    }
    return s;
}

// --- verify-hom -------------------------------------------------------------

int run_verify_hom(const Common& c) {
    std::string err;
    auto ctx = build_context(c, err);
    if (!ctx) return config_error(err);
    const Alg hat = ctx->hat;

    RunReport rep;
    rep.command = "verify-hom";
    rep.conf("m", std::to_string(c.m));
    rep.conf("n", std::to_string(c.n));
    rep.conf("r", c.r_text);
    rep.conf("threads", std::to_string(thread_count_from_env()));
    Clock::time_point t0 = Clock::now();

    HomReport hr = verify_homomorphism(*ctx);
    for (int label = 1; label <= 14; ++label) {
        int count = 0;
        bool ok = true;
        std::string detail;
        for (const HomCheck& hc : hr.checks) {
            if (hc.case_label != label) continue;
            ++count;
            if (!hc.pass && ok) {
                ok = false;
                detail = gen_text(hat, hc.x_gen) + "," + gen_text(hat, hc.y_gen) + ": " + hc.detail;
            }
        }
        if (ok) detail = std::to_string(count) + " generator pairs";
        rep.add("hom/" + std::to_string(label), "bracket-compatibility", ok, detail);
    }

    if (hat.p != hat.q) {
        DiagramReport dr = verify_diagram(hat, c.seed);
        rep.add("hom/diagram", "factorization", dr.all_pass,
                dr.all_pass ? "projection and embedding composites agree" : dr.failures.front());
    }
    return emit(rep, c, t0);
}

// --- center -----------------------------------------------------------------

std::pair<bool, std::string> center_entry(const CenterReport& r, const std::string& ok_detail) {
    if (r.all_pass) return {true, ok_detail};
    std::string d = r.failures.front();
    if (r.failures.size() > 1) d += " (+" + std::to_string(r.failures.size() - 1) + " more)";
    return {false, d};
}

int run_center(const Common& c, int kmax, int fl) {
    if (kmax < 1) return config_error("kmax must be at least 1");
    if (fl > -1) return config_error("floor must be at most -1");
    std::string err;
    auto ctx = build_context(c, err);
    if (!ctx) return config_error(err);
    const Alg g{c.m, c.n, 1};
    const Alg hat = ctx->hat;
    const TElt<Rat> R = ctx->R;

    RunReport rep;
    rep.command = "center";
    rep.conf("m", std::to_string(c.m));
    rep.conf("n", std::to_string(c.n));
    rep.conf("r", c.r_text);
    rep.conf("kmax", std::to_string(kmax));
    rep.conf("floor", std::to_string(fl));
    rep.conf("threads", std::to_string(thread_count_from_env()));
    Clock::time_point t0 = Clock::now();

    std::string kd = "k <= " + std::to_string(kmax);
    struct Job {
        std::string id, group;
        std::function<std::pair<bool, std::string>()> fn;
    };
    std::vector<Job> jobs;
    jobs.push_back({"center/newton", "power-sums", [g, kmax, kd] { return center_entry(newton_identity(g, kmax), kd); }});
    jobs.push_back(
        {"center/berezinian", "determinant-series", [g, kmax, kd] { return center_entry(berezinian_relation(g, kmax), kd); }});
    jobs.push_back({"center/eigenvalues", "diagonal-evaluation",
                    [g, kmax, kd] { return center_entry(chi_capelli_identity(g, kmax), kd); }});
    jobs.push_back({"center/coefficients", "determinant-series", [g, fl]() -> std::pair<bool, std::string> {
                        Laurent<UElt<Rat>> cb = capelli_berezinian(g, fl);
                        int lo = 0, hi = 0;
                        bool any = false;
                        for (const auto& [e, z] : cb.c) {
                            if (z.is_zero()) continue;
                            if (!any) lo = e;
                            any = true;
                            hi = e;
                            if (!is_central(z)) return {false, "coefficient of T^" + std::to_string(e) + " is not central"};
                            if (!is_supersymmetric(hc_image(z), g))
                                return {false, "coefficient of T^" + std::to_string(e) + " has a non-supersymmetric projection"};
                        }
                        return {true, "coefficients T^" + std::to_string(lo) + "..T^" + std::to_string(hi) +
                                          " central, projections supersymmetric"};
                    }});
    jobs.push_back(
        {"center/transfer", "diagonal-evaluation", [hat, R, kmax, kd] { return center_entry(verify_hc_transfer(hat, R, kmax), kd); }});
    jobs.push_back(
        {"center/image-series", "image", [hat, R, kmax, kd] { return center_entry(capelli_phi_main(hat, R, kmax), kd); }});
    jobs.push_back(
        {"center/matrix-images", "image", [hat, R, kmax, kd] { return center_entry(rk_images_check(hat, R, kmax), kd); }});
    jobs.push_back(
        {"center/invariant-images", "image", [hat, R, kmax, kd] { return center_entry(gelfand_images_check(hat, R, kmax), kd); }});

    std::launch pol = thread_count_from_env() > 1 ? std::launch::async : std::launch::deferred;
    std::vector<std::future<std::pair<bool, std::string>>> futs;
    futs.reserve(jobs.size());
    for (const Job& j : jobs)
        futs.push_back(std::async(pol, [&j]() -> std::pair<bool, std::string> {
            try {
                return j.fn();
            } catch (const std::exception& e) {
                return {false, std::string("error: ") + e.what()};
            }
        }));
    for (size_t i = 0; i < jobs.size(); ++i) {
        auto [ok, detail] = futs[i].get();
        rep.add(jobs[i].id, jobs[i].group, ok, detail);
    }
    return emit(rep, c, t0);
}

// --- inflate ----------------------------------------------------------------

int run_inflate(const Common& c, const std::string& a_text, const std::string& lambda_text, int depth, bool expect_atypical) {
    if (depth < 1) return config_error("depth must be at least 1");
    std::string err;
    auto ctx = build_context(c, err);
    if (!ctx) return config_error(err);
    const Alg hat = ctx->hat;
    const Alg sm = small_of_hat(hat);

    Rat a;
    std::vector<Rat> lambda;
    try {
        a = rat_parse(a_text);
        lambda = parse_weights(lambda_text);
    } catch (const std::exception& e) {
        return config_error(e.what());
    }
    if (static_cast<int>(lambda.size()) != sm.dim())
        return config_error("lambda needs " + std::to_string(sm.dim()) + " entries");

    RunReport rep;
    rep.command = "inflate";
    rep.conf("m", std::to_string(c.m));
    rep.conf("n", std::to_string(c.n));
    rep.conf("a", rat_text(a));
    rep.conf("lambda", join_rats(lambda));
    rep.conf("r", c.r_text);
    rep.conf("depth", std::to_string(depth));
    rep.conf("seed", std::to_string(c.seed));
    Clock::time_point t0 = Clock::now();

    Inflated<Rat> M = inflated(hat, a, lambda, ctx->R, depth);
    bool regime = verma_regime(sm, a, lambda);
    std::vector<Rat> lt = lambda_tilde(M);

    {
        Rat tw = twist_scalar(M);
        std::vector<Rat> pt{a};
        std::vector<Rat> rh = rho(sm);
        for (int i = 0; i < sm.dim(); ++i) pt.push_back(lambda[static_cast<size_t>(i)] + rh[static_cast<size_t>(i)]);
        Rat expect = poly_eval(chi_zero(ctx->R), pt);
        rep.add("inflate/twist-scalar", "action", tw == expect,
                tw == expect ? "twist acts on the top vector by " + rat_text(tw)
                             : "twist scalar " + rat_text(tw) + " != evaluation " + rat_text(expect));
    }

    {
        InfVec<Rat> hw = inf_hw(M);
        bool ok = true;
        for (int v = 0; v < hat.dim() && ok; ++v)
            ok = act(M, u_gen<Rat>(hat, v, v), hw) == lt[static_cast<size_t>(v)] * hw;
        for (int x = 0; x < hat.dim() && ok; ++x)
            for (int y = x + 1; y < hat.dim() && ok; ++y) ok = act(M, u_gen<Rat>(hat, x, y), hw).is_zero();
        rep.add("inflate/top-weight", "action", ok,
                ok ? "top vector is a highest-weight line of weight (" + join_rats(lt) + ")"
                   : "top vector fails the highest-weight equations");
    }

    {
        bool ok = true;
        std::string detail;
        if (depth < 2) {
            detail = "window too shallow to sample commutators";
        } else {
            std::vector<InfKey> inner = inf_basis(hat, depth - 2);
            Rng rng(c.seed);
            for (int it = 0; it < 3 && ok; ++it) {
                InfVec<Rat> v;
                for (const InfKey& k : inner) iv_add(v, k, rng.small_rat_or_zero());
                if (v.is_zero()) iv_add(v, inner.front(), Rat(1));
                for (int x = 0; x < hat.dim() * hat.dim() && ok; ++x)
                    for (int y = 0; y < hat.dim() * hat.dim() && ok; ++y) {
                        UElt<Rat> ex = u_gen<Rat>(hat, gen_row(hat, x), gen_col(hat, x));
                        UElt<Rat> ey = u_gen<Rat>(hat, gen_row(hat, y), gen_col(hat, y));
                        InfVec<Rat> xy = act(M, ex, act(M, ey, v));
                        InfVec<Rat> yx = act(M, ey, act(M, ex, v));
                        InfVec<Rat> comm = (gen_parity(hat, x) && gen_parity(hat, y)) ? xy + yx : xy - yx;
                        InfVec<Rat> want = act(M, bracket(ex, ey), v);
                        if (comm.overflow || want.overflow) {
                            ok = false;
                            detail = "window overflow while sampling commutators";
                        } else if (!(comm == want)) {
                            ok = false;
                            detail = "commutator mismatch at " + gen_text(hat, x) + "," + gen_text(hat, y);
                        }
                    }
            }
            if (ok) detail = "3 sampled vectors, all ordered generator pairs";
        }
        rep.add("inflate/relations", "action", ok, detail);
    }

    {
        auto cond = inflation_condition(sm, a, lambda);
        auto pair = top_pair_condition(hat, lt);
        bool ok = cond.size() == pair.size();
        for (size_t i = 0; ok && i < cond.size(); ++i) ok = cond[i].holds == pair[i].holds;
        bool all_hold = true;
        for (const WeightTest& t : cond) all_hold = all_hold && t.holds;
        rep.add("inflate/criteria", "structure", ok,
                ok ? std::string("per-coordinate tests agree with the shifted-weight pair tests; ") +
                         (all_hold ? "all hold" : "some fail") + (regime ? ", plain regime" : ", outside the plain regime")
                   : "the two criterion forms disagree");
    }

    size_t singular_count = 0;
    {
        auto hwv = highest_weight_vectors(M);
        singular_count = hwv.size();
        bool ok = !regime || singular_count == 1;
        std::string detail = std::to_string(singular_count) + " singular vector" + (singular_count == 1 ? "" : "s") +
                             " in the window";
        if (!regime) detail += " (outside the uniqueness regime)";
        if (!ok) detail = "expected a unique singular vector, found " + std::to_string(singular_count);
        rep.add("inflate/singular", "structure", ok, detail);
    }

    {
        SimplicityReport pr = simplicity_probe(M, 6, c.seed);
        bool ok;
        std::string detail;
        if (regime) {
            ok = pr.simple();
            detail = ok ? "top vector generates the window; descent recovers the top line"
                        : (pr.generated_from_top ? "descent fails to recover the top line"
                                                 : "top vector generates a proper submodule");
        } else {
            ok = true;
            detail = pr.generated_from_top ? "top vector generates the window despite a failing criterion"
                                           : "degeneration detected: the top vector generates a proper submodule";
        }
        rep.add("inflate/generation", "structure", ok, detail);
    }

    {
        std::vector<InfKey> basis = inf_basis(hat, depth);
        Rng rng(c.seed + 1);
        bool ok = true;
        for (int it = 0; it < 5 && ok; ++it) {
            InfVec<Rat> v;
            for (const InfKey& k : basis) iv_add(v, k, rng.small_rat_or_zero());
            if (v.is_zero()) iv_add(v, basis.front(), Rat(1));
            InfVec<Rat> low = s_descent(M, v);
            ok = !low.is_zero() && !low.overflow && s_value(low) == 0;
        }
        rep.add("inflate/descent", "structure", ok,
                ok ? "5 sampled vectors reach the bottom layer" : "descent lost a vector before the bottom layer");
    }

    {
        auto pc = product_character(hat, depth);
        auto vc = verma_character(hat, depth);
        bool ok = pc == vc;
        long total = 0;
        for (const auto& [k, v] : pc) total += v;
        rep.add("inflate/characters", "structure", ok,
                ok ? "layer tables match to height " + std::to_string(depth) + " (" + std::to_string(pc.size()) +
                         " drops, " + std::to_string(total) + " states)"
                   : "product and free lowering tables differ");
    }

    if (expect_atypical) {
        bool ok = !typical(sm, lambda);
        rep.add("inflate/atypicality", "structure", ok,
                ok ? "weight is atypical; the character equality above is the weight-independent evidence"
                   : "weight is typical");
    }
    return emit(rep, c, t0);
}

// --- kernel -----------------------------------------------------------------

int run_kernel(const Common& c, const std::string& probe) {
    if (c.m < 0 || c.n < 0) return config_error("ranks must be nonnegative");
    if (c.m + 1 == c.n) return config_error("kernel analysis needs m+1 != n (the canonical twist divides by m+1-n)");
    Alg hat{c.m + 1, c.n, 0};

    RunReport rep;
    rep.command = "kernel";
    rep.conf("m", std::to_string(c.m));
    rep.conf("n", std::to_string(c.n));
    rep.conf("seed", std::to_string(c.seed));
    if (!probe.empty()) rep.conf("probe", probe);
    Clock::time_point t0 = Clock::now();

    PhiContext<Rat> ctx = phi_context(hat, r_canonical<Rat>(hat));
    UElt<Rat> g1 = gelfand(hat, 1);

    bool gok = phi_apply(ctx, g1).is_zero();
    rep.add("kernel/generator", "ideal", gok,
            gok ? "the first invariant maps to zero" : "the first invariant has a nonzero image");

    PsiReport pr = psi_left_inverse(hat);
    rep.add("kernel/left-inverse", "retraction", pr.all_pass,
            pr.all_pass ? "operator correspondence retracts the restriction on traceless generators" : pr.failures.front());

    {
        Rng rng(c.seed);
        int trials = 8, good = 0;
        std::string bad;
        for (int t = 0; t < trials; ++t) {
            std::vector<int> word;
            long len = rng.range(0, 2);
            for (long w = 0; w < len; ++w) {
                int i = static_cast<int>(rng.range(0, hat.dim() - 1));
                int j = static_cast<int>(rng.range(0, hat.dim() - 1));
                word.push_back(gen_id(hat, i, j));
            }
            UElt<Rat> x = u_from_word<Rat>(hat, word, rng.small_rat()) * g1;
            KernelCertificate cert = kernel_membership(x);
            if (cert.in_kernel && cert.certified)
                ++good;
            else if (bad.empty())
                bad = "random multiple escaped the kernel certificate";
        }
        rep.add("kernel/ideal-sample", "ideal", good == trials,
                good == trials ? std::to_string(trials) + " random multiples of the invariant certified" : bad);
    }

    if (hat.dim() >= 2) {
        KernelCertificate cert = kernel_membership(u_gen<Rat>(hat, 0, 1));
        rep.add("kernel/non-member", "ideal", !cert.in_kernel,
                !cert.in_kernel ? "e(0,1) has a nonzero image" : "e(0,1) unexpectedly maps to zero");
    }

    if (!probe.empty()) {
        try {
            UElt<Rat> x = parse_uelt(hat, probe);
            KernelCertificate cert = kernel_membership(x);
            std::string d;
            if (!cert.in_kernel) {
                d = "not a member: the image is nonzero";
            } else if (cert.certified) {
                std::string w = uelt_text(cert.witness);
                if (w.size() > 120) w = w.substr(0, 117) + "...";
                d = "member; certificate: probe = G1 * (" + w + ")";
            } else {
                d = "member, but the variable-elimination decomposition yields no ideal certificate";
            }
            rep.add("kernel/probe", "ideal", true, d);
        } catch (const std::exception& e) {
            return config_error(std::string("probe: ") + e.what());
        }
    }
    return emit(rep, c, t0);
}

// --- fixtures ---------------------------------------------------------------

std::string fixture_header(const std::string& family, int m, int n, const std::string& r_text) {
    return "# capelli fixtures v1\n# family " + family + "\n# m " + std::to_string(m) + "\n# n " + std::to_string(n) +
           "\n# r " + r_text + "\n";
}

std::string hom_fixture_text(int m, int n, const std::string& r_text) {
    Alg hat{m + 1, n, 0};
    PhiContext<Rat> ctx = phi_context(hat, parse_twist(hat, r_text));
    std::string out = fixture_header("hom", m, n, r_text);
    int d2 = hat.dim() * hat.dim();
    for (int x = 0; x < d2; ++x)
        for (int y = 0; y < d2; ++y) {
            UElt<Rat> ex = u_gen<Rat>(hat, gen_row(hat, x), gen_col(hat, x));
            UElt<Rat> ey = u_gen<Rat>(hat, gen_row(hat, y), gen_col(hat, y));
            std::string xg = gen_text(hat, x), yg = gen_text(hat, y);
            bool plus = gen_parity(hat, x) && gen_parity(hat, y);
            std::string lhs = "phi(" + xg + ")*phi(" + yg + ") " + (plus ? "+" : "-") + " phi(" + yg + ")*phi(" + xg + ")";
            TElt<Rat> val = phi_apply(ctx, bracket(ex, ey));
            if (!(parse_phi_expr(ctx, lhs) == val)) throw std::runtime_error("fixture generation is inconsistent at " + xg + "," + yg);
            FixtureLine f{"hom/" + std::to_string(hom_case_label(hat, x, y)) + "/" + xg + "," + yg, lhs, telt_text(val)};
            out += fixture_render(f) + "\n";
        }
    return out;
}

std::string center_fixture_text(int m, int n, const std::string& r_text, int kmax) {
    Alg hat{m + 1, n, 0};
    TElt<Rat> R = parse_twist(hat, r_text);
    PhiContext<Rat> ctx = phi_context(hat, R);
    std::string out = fixture_header("center", m, n, r_text);
    out += "# kmax " + std::to_string(kmax) + "\n";
    for (int k = 0; k <= kmax; ++k) {
        TElt<Rat> val = phi_apply(ctx, gelfand(hat, k));
        if (!(val == gelfand_image(hat, R, k))) throw std::runtime_error("invariant image mismatch at k=" + std::to_string(k));
        FixtureLine f{"center/invariant/" + std::to_string(k), "phi(G_" + std::to_string(k) + ")", telt_text(val)};
        out += fixture_render(f) + "\n";
    }
    for (int k = 1; k <= kmax; ++k)
        for (int a = 0; a < hat.dim(); ++a)
            for (int b = 0; b < hat.dim(); ++b) {
                TElt<Rat> val = phi_apply(ctx, r_element(hat, k, a, b));
                if (!(val == rk_image(hat, R, k, a, b)))
                    throw std::runtime_error("matrix-entry image mismatch at k=" + std::to_string(k));
                std::string kab = std::to_string(k) + "," + std::to_string(a) + "," + std::to_string(b);
                FixtureLine f{"center/matrix/" + kab, "phi(r(" + kab + "))", telt_text(val)};
                out += fixture_render(f) + "\n";
            }
    return out;
}

long count_checks(const std::string& text) {
    long n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("CHECK ", 0) == 0) ++n;
    return n;
}

std::pair<bool, std::string> check_fixture_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return {false, "cannot open"};
    std::stringstream buf;
    buf << f.rdbuf();
    std::string content = buf.str();

    std::map<std::string, std::string> header;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) != 0) continue;
        std::istringstream ls(line.substr(2));
        std::string key;
        ls >> key;
        std::string value;
        std::getline(ls, value);
        size_t s = value.find_first_not_of(' ');
        header[key] = s == std::string::npos ? "" : value.substr(s);
    }
    for (const char* key : {"family", "m", "n", "r"})
        if (!header.count(key)) return {false, std::string("missing header key ") + key};

    std::string family = header["family"];
    int m = 0, n = 0, kmax = 0;
    std::string regen;
    try {
        m = std::stoi(header["m"]);
        n = std::stoi(header["n"]);
        if (family == "hom") {
            regen = hom_fixture_text(m, n, header["r"]);
        } else if (family == "center") {
            if (!header.count("kmax")) return {false, "missing header key kmax"};
            kmax = std::stoi(header["kmax"]);
            regen = center_fixture_text(m, n, header["r"], kmax);
        } else {
            return {false, "unknown family " + family};
        }
    } catch (const std::exception& e) {
        return {false, std::string("header: ") + e.what()};
    }

    Alg hat{m + 1, n, 0};
    PhiContext<Rat> ctx;
    try {
        ctx = phi_context(hat, parse_twist(hat, header["r"]));
    } catch (const std::exception& e) {
        return {false, std::string("twist: ") + e.what()};
    }

    std::istringstream in2(content);
    long lineno = 0, checked = 0;
    while (std::getline(in2, line)) {
        ++lineno;
        std::optional<FixtureLine> fl;
        try {
            fl = fixture_parse_line(line);
        } catch (const std::exception& e) {
            return {false, "line " + std::to_string(lineno) + ": " + e.what()};
        }
        if (!fl) continue;
        try {
            TElt<Rat> lhs = parse_phi_expr(ctx, fl->lhs);
            TElt<Rat> rhs = parse_telt(hat, fl->rhs);
            if (!(lhs == rhs)) return {false, "line " + std::to_string(lineno) + " (" + fl->id + "): sides differ"};
            if (telt_text(lhs) != fl->rhs)
                return {false, "line " + std::to_string(lineno) + " (" + fl->id + "): stored text is not canonical"};
        } catch (const std::exception& e) {
            return {false, "line " + std::to_string(lineno) + " (" + fl->id + "): " + e.what()};
        }
        ++checked;
    }

    if (regen != content) {
        std::istringstream a(content), b(regen);
        std::string la, lb;
        long at = 0;
        while (true) {
            ++at;
            bool ga = static_cast<bool>(std::getline(a, la));
            bool gb = static_cast<bool>(std::getline(b, lb));
            if (!ga && !gb) break;
            if (!ga || !gb || la != lb) return {false, "regeneration differs first at line " + std::to_string(at)};
        }
        return {false, "regeneration differs in line endings"};
    }
    return {true, std::to_string(checked) + " checks verified; byte-identical regeneration"};
}

int run_fixtures(const Common& c, int kmax, const std::string& check_dir) {
    if (kmax < 1) return config_error("kmax must be at least 1");
    RunReport rep;
    rep.command = "fixtures";
    Clock::time_point t0 = Clock::now();

    if (!check_dir.empty()) {
        rep.conf("mode", "check");
        rep.conf("dir", check_dir);
        std::filesystem::path dir(check_dir);
        if (!std::filesystem::is_directory(dir)) return config_error(check_dir + " is not a directory");
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) return config_error("no fixture files in " + check_dir);
        for (const auto& p : files) {
            auto [ok, detail] = check_fixture_file(p);
            rep.add("fixtures/" + p.filename().string(), "fixtures", ok, detail);
        }
        return emit(rep, c, t0);
    }

    if (c.out.empty()) return config_error("fixtures needs --out <dir> or --check <dir>");
    std::string err;
    auto ctx = build_context(c, err);
    if (!ctx) return config_error(err);

    rep.conf("mode", "generate");
    rep.conf("m", std::to_string(c.m));
    rep.conf("n", std::to_string(c.n));
    rep.conf("r", c.r_text);
    rep.conf("kmax", std::to_string(kmax));
    rep.conf("dir", c.out);

    std::filesystem::path dir(c.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return config_error("cannot create " + c.out);

    std::string tag = "-m" + std::to_string(c.m) + "-n" + std::to_string(c.n) + ".txt";
    std::vector<std::pair<std::string, std::string>> files;
    try {
        files.emplace_back("hom" + tag, hom_fixture_text(c.m, c.n, c.r_text));
        files.emplace_back("center" + tag, center_fixture_text(c.m, c.n, c.r_text, kmax));
    } catch (const std::exception& e) {
        return config_error(e.what());
    }
    for (const auto& [name, text] : files) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) return config_error("cannot write " + (dir / name).string());
        f << text;
        rep.add("fixtures/" + name, "fixtures", true, "wrote " + std::to_string(count_checks(text)) + " checks");
    }
    Common stdout_only = c;
    stdout_only.out.clear();  // --out named the fixture directory, not the report
    return emit(rep, stdout_only, t0);
}

int guard(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return config_error(e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact rational checks for a mixed-product homomorphism and its center toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    auto add_common = [](CLI::App* sub, Common& c, bool with_r) {
        sub->add_option("-m", c.m, "even rank of the base algebra")->required();
        sub->add_option("-n", c.n, "odd rank of the base algebra")->required();
        if (with_r) sub->add_option("--r", c.r_text, "twist: zero, r1, or custom:<expr>");
        sub->add_option("--seed", c.seed, "seed for sampled checks");
        sub->add_flag("--json", c.json, "machine-readable report");
        sub->add_option("--out", c.out, "write the report to this file");
    };

    Common ch;
    auto* hom = app.add_subcommand("verify-hom", "bracket table for the extension homomorphism");
    add_common(hom, ch, true);
    hom->callback([&] { rc = guard([&] { return run_verify_hom(ch); }); });

    Common cc;
    int kmax = 4, fl = -6;
    auto* cen = app.add_subcommand("center", "central-element identities");
    add_common(cen, cc, true);
    cen->add_option("--kmax", kmax, "largest invariant degree");
    cen->add_option("--floor", fl, "series truncation exponent (at most -1)");
    cen->callback([&] { rc = guard([&] { return run_center(cc, kmax, fl); }); });

    Common ci;
    std::string a_text, lambda_text;
    int depth = 3;
    bool atyp = false;
    auto* inf = app.add_subcommand("inflate", "product-module structure checks");
    add_common(inf, ci, true);
    inf->add_option("-a", a_text, "function-degree parameter")->required();
    inf->add_option("--lambda", lambda_text, "comma-separated base weight")->required();
    inf->add_option("-D,--depth", depth, "window depth");
    inf->add_flag("--atypical", atyp, "assert the weight is atypical");
    inf->callback([&] { rc = guard([&] { return run_inflate(ci, a_text, lambda_text, depth, atyp); }); });

    Common ck;
    std::string probe;
    auto* ker = app.add_subcommand("kernel", "kernel of the canonical-twist homomorphism");
    add_common(ker, ck, false);
    ker->add_option("--probe", probe, "element to test for membership");
    ker->callback([&] { rc = guard([&] { return run_kernel(ck, probe); }); });

    Common cf;
    cf.r_text = "r1";
    int fkmax = 3;
    std::string check_dir;
    auto* fix = app.add_subcommand("fixtures", "write or re-verify identity files");
    fix->add_option("-m", cf.m, "even rank of the base algebra");
    fix->add_option("-n", cf.n, "odd rank of the base algebra");
    fix->add_option("--r", cf.r_text, "twist recorded in the files");
    fix->add_option("--kmax", fkmax, "largest degree in the center family");
    fix->add_option("--out", cf.out, "directory to write fixture files into");
    fix->add_option("--check", check_dir, "directory of fixture files to re-verify");
    fix->add_flag("--json", cf.json, "machine-readable report");
    fix->callback([&] { rc = guard([&] { return run_fixtures(cf, fkmax, check_dir); }); });

    CLI11_PARSE(app, argc, argv);
    return rc;
}
