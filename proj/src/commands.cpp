#include "arqft/commands.hpp"

#include "arqft/cache.hpp"
#include "arqft/errors.hpp"
#include "arqft/kernels.hpp"
#include "arqft/parallel.hpp"
#include "arqft/qform.hpp"
#include "arqft/spectral.hpp"
#include "arqft/symbols.hpp"
#include "arqft/zeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

namespace arqft {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

TernaryForm example_form_q1() {
    const auto& F = PrimeModulus::get(5);
    return TernaryForm::diagonal(Poly::from_ints(F, {1}), Poly::from_ints(F, {1, 1, 0, 1}), Poly::from_ints(F, {2}));
}

TernaryForm example_form_q2() {
    const auto& F = PrimeModulus::get(5);
    auto P = [&](std::initializer_list<std::int64_t> c) { return Poly::from_ints(F, c); };
    return TernaryForm::from_coefficients(P({-1, -1, 1}), P({0, 1}), P({2}), P({1, 1}), P({}), P({}));
}

namespace {

struct Ctx {
    RunConfig cfg;
    bool p_given = false;
    std::ostream& out;
    std::ostream& err;
    DiskCache cache;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw PreconditionError("cannot write " + tmp.string());
        f << body;
    }
    fs::rename(tmp, path);
}

// artifact to out-dir when configured, else to stdout
void emit(Ctx& c, const std::string& name, const std::string& body) {
    if (c.cfg.out_dir.empty()) {
        c.out << body;
        return;
    }
    const fs::path path = fs::path(c.cfg.out_dir) / name;
    write_atomic(path, body);
    c.out << "wrote " << path.string() << "\n";
}

const PrimeModulus& field_of(const Ctx& c) { return PrimeModulus::get(c.cfg.p); }

TernaryForm load_form(Ctx& c, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw PreconditionError("cannot read form file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    TernaryForm Q = TernaryForm::from_json(ss.str());
    if (c.p_given && Q.field().p() != c.cfg.p) throw PreconditionError("form file p differs from --p");
    c.cfg.p = Q.field().p();
    return Q;
}

void require_anisotropic(const TernaryForm& Q) {
    if (!is_anisotropic_infty(Q)) throw PreconditionError("form is isotropic at infinity; representation sets are infinite");
}

std::vector<FamilyRow> rows_for(Ctx& c, const std::vector<Poly>& Ds) {
    for (const auto& D : Ds) QuadraticDiscriminant::make(D);
    const auto Ls = family_l_polynomials(Ds, c.cfg.threads, c.cache);
    std::vector<std::optional<FamilyRow>> slots(Ds.size());
    parallel_for(Ds.size(), c.cfg.threads, [&](std::size_t i) { slots[i] = analyze(Ds[i], Ls[i], c.cfg.tol); });
    std::vector<FamilyRow> rows;
    for (auto& s : slots) rows.push_back(std::move(*s));
    return rows;
}

std::vector<Poly> discriminants_from(Ctx& c, const std::string& D_text, int deg, bool all) {
    const auto& F = field_of(c);
    if (!D_text.empty()) return {parse_poly(F, D_text)};
    if (all && deg >= 1) return squarefree_monic(F, deg);
    throw PreconditionError("give --D or --deg with --all");
}

int hard_failures(const std::vector<FamilyRow>& rows) {
    int bad = 0;
    for (const auto& r : rows) {
        const bool fe_applies = r.pure.weil.degree() % 2 == 0;
        if (!r.rh || (fe_applies && !r.fe.holds)) ++bad;
    }
    return bad;
}

int cmd_lfun(Ctx& c, const std::string& D_text, int deg, bool all) {
    const auto rows = rows_for(c, discriminants_from(c, D_text, deg, all));
    std::string body = csv_header() + "\n";
    for (const auto& r : rows) body += csv_row(r) + "\n";
    emit(c, "lfun.csv", body);
    const int bad = hard_failures(rows);
    if (bad) c.err << bad << " rows failed RH or the functional equation\n";
    return bad ? kExitCheckFailed : kExitOk;
}

int cmd_zeros(Ctx& c, const std::string& D_text, int deg, bool all) {
    const auto rows = rows_for(c, discriminants_from(c, D_text, deg, all));
    std::string body = "D,k,angle,re,im,modulus_times_sqrt_p\n";
    for (const auto& r : rows)
        for (std::size_t k = 0; k < r.zs.roots.size(); ++k) {
            const auto z = r.zs.roots[k];
            body += r.D.to_string() + "," + std::to_string(k) + "," + fmt(r.zs.angles[k]) + "," + fmt(z.real()) + "," +
                    fmt(z.imag()) + "," + fmt(std::abs(z) * std::sqrt(static_cast<double>(c.cfg.p))) + "\n";
        }
    emit(c, "zeros.csv", body);
    const int bad = hard_failures(rows);
    if (bad) c.err << bad << " rows failed RH or the functional equation\n";
    return bad ? kExitCheckFailed : kExitOk;
}

int cmd_family(Ctx& c, int deg, bool all, std::size_t sample) {
    if (deg < 1) throw PreconditionError("family: --deg >= 1");
    if (!all && sample == 0) throw PreconditionError("family: give --all or --sample N");
    FamilyOptions opt;
    opt.sample = all ? 0 : sample;
    opt.seed = c.cfg.seed;
    opt.workers = c.cfg.threads;
    opt.tol = c.cfg.tol;
    const auto rows = family_rows(field_of(c), deg, opt, c.cache);
    const auto st = family_stats(deg, rows);
    if (!c.cfg.out_dir.empty()) {
        std::string body = csv_header() + "\n";
        for (const auto& r : rows) body += csv_row(r) + "\n";
        emit(c, "family_deg" + std::to_string(deg) + ".csv", body);
    }
    json j;
    j["p"] = c.cfg.p;
    j["degree"] = deg;
    j["sample_size"] = st.sample_size;
    j["full_family"] = all;
    j["seed"] = c.cfg.seed;
    j["angles"] = st.angle_count;
    j["discrepancy"] = st.discrepancy;
    j["max_M"] = st.max_M;
    j["min_central"] = st.min_central;
    j["max_central"] = st.max_central;
    j["rh_failures"] = st.rh_failures;
    j["fe_failures"] = st.fe_failures;
    j["bound_checked"] = st.bound_checked;
    j["bound_violations"] = st.bound_violations;
    c.out << j.dump(2) << "\n";
    return st.rh_failures + st.fe_failures + st.bound_violations ? kExitCheckFailed : kExitOk;
}

std::string vec_text(const Vec3& v) { return v[0].to_string() + "," + v[1].to_string() + "," + v[2].to_string(); }

int cmd_rep(Ctx& c, const std::string& form, const std::string& D_text, int deg, bool all, bool solutions) {
    const TernaryForm Q = load_form(c, form);
    const auto& F = Q.field();
    require_anisotropic(Q);
    std::string body;
    if (!D_text.empty()) {
        const Poly D = parse_poly(F, D_text);
        const auto R = representations(Q, D, c.cfg.threads, c.cfg.budget);
        if (solutions) {
            body = "D,x,y,z\n";
            for (const auto& v : R.solutions) body += D.to_string() + "," + vec_text(v) + "\n";
        } else {
            body = "D,deg,r_Q\n" + D.to_string() + "," + std::to_string(D.degree()) + "," + std::to_string(R.count()) + "\n";
        }
    } else if (all && deg >= 0) {
        const auto counts = theta_counts(Q, deg, c.cfg.threads, c.cfg.budget);
        body = "D,deg,r_Q\n";
        std::uint64_t lo = 1;
        for (int i = 0; i < deg; ++i) lo *= F.p();
        for (std::uint64_t idx = deg == 0 ? 1 : lo; idx < lo * F.p(); ++idx) {
            const Poly D = poly_from_index(F, deg + 1, idx);
            body += D.to_string() + "," + std::to_string(deg) + "," + std::to_string(counts[idx]) + "\n";
        }
    } else {
        throw PreconditionError("rep: give --D or --deg with --all");
    }
    emit(c, "rep.csv", body);
    return kExitOk;
}

json form_json(const TernaryForm& Q) { return json::parse(Q.to_json()); }

int cmd_auto(Ctx& c, const std::string& form) {
    const TernaryForm Q = load_form(c, form);
    require_anisotropic(Q);
    json j;
    j["form"] = form_json(Q);
    j["reduced"] = form_json(reduce(Q));
    j["aut"] = automorphism_count(Q);
    emit(c, "auto.json", j.dump(2) + "\n");
    return kExitOk;
}

GenusSet genus_of(const TernaryForm& Q) {
    require_anisotropic(Q);
    return genus_enumerate(Q, good_linear_primes(Q));
}

int cmd_genus(Ctx& c, const std::string& form) {
    const TernaryForm Q = load_form(c, form);
    const GenusSet G = genus_of(Q);
    json j;
    j["form"] = form_json(Q);
    j["classes"] = json::array();
    for (std::size_t i = 0; i < G.reps.size(); ++i)
        j["classes"].push_back({{"gram", form_json(G.reps[i])["gram"]}, {"aut", G.aut[i]}});
    j["weight"] = to_string(G.weight);
    j["certified"] = G.certified;
    j["first_prime_classes"] = G.first_prime_classes;
    j["primes"] = json::array();
    for (const auto& P : G.primes) j["primes"].push_back(P.to_string());
    emit(c, "genus.json", j.dump(2) + "\n");
    if (!G.certified) c.err << "genus not certified closed under all primes\n";
    return kExitOk;
}

std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw PreconditionError("bad degree list '" + text + "'");
        }
    }
    if (out.empty()) throw PreconditionError("empty degree list");
    return out;
}

int cmd_mass(Ctx& c, const std::string& form, const std::string& degs, std::size_t limit) {
    const TernaryForm Q = load_form(c, form);
    const GenusSet G = genus_of(Q);
    std::vector<Poly> Ds;
    for (int d : parse_degrees(degs)) {
        std::size_t taken = 0;
        for (const auto& D : enumerate_monic(Q.field(), d)) {
            if (limit && taken >= limit) break;
            if (!admissibility(Q, D).empty()) continue;
            Ds.push_back(D);
            ++taken;
        }
    }
    const auto S = siegel_ratio_scan(Q, G, Ds);
    std::string body = "D,deg,class,r_G_num,r_G_den,density_num,density_den,ratio_num,ratio_den\n";
    for (const auto& r : S.rows)
        body += r.D.to_string() + "," + std::to_string(r.D.degree()) + "," + square_class_name(r.cls) + "," +
                numerator(r.r_genus).str() + "," + denominator(r.r_genus).str() + "," +
                numerator(r.good_density).str() + "," + denominator(r.good_density).str() + "," +
                numerator(r.ratio).str() + "," + denominator(r.ratio).str() + "\n";
    emit(c, "mass.csv", body);
    json j;
    j["rows"] = S.rows.size();
    j["skipped"] = S.skipped.size();
    j["genus_certified"] = G.certified;
    j["constant"] = S.constant;
    j["constants"] = json::array();
    for (const auto& [cls, v] : S.constants) j["constants"].push_back({{"class", square_class_name(cls)}, {"ratio", to_string(v)}});
    if (!G.certified) j["note"] = "genus not certified; ratio reported but degraded to the density oracle check";
    (c.cfg.out_dir.empty() ? c.err : c.out) << j.dump(2) << "\n";
    return S.constant ? kExitOk : kExitCheckFailed;
}

int cmd_residual(Ctx& c, const std::string& form, int maxdeg) {
    const TernaryForm Q = load_form(c, form);
    const GenusSet G = genus_of(Q);
    const int parity = discriminant(Q).degree() % 2;
    std::vector<int> degrees;
    for (int d = 1; d <= maxdeg; ++d)
        if (d % 2 == parity) degrees.push_back(d);
    if (degrees.empty()) throw PreconditionError("residual: no admissible degree up to --maxdeg");
    const auto R = residual_scan(Q, G, degrees, c.cfg.threads);
    std::string body = "D,deg,r_Q,r_G_num,r_G_den,e_num,e_den,log_ratio,obstructed\n";
    for (const auto& r : R.rows)
        body += r.D.to_string() + "," + std::to_string(r.D.degree()) + "," + std::to_string(r.r_form) + "," +
                numerator(r.r_genus).str() + "," + denominator(r.r_genus).str() + "," + numerator(r.e).str() + "," +
                denominator(r.e).str() + "," + (std::isnan(r.log_ratio) ? std::string("nan") : fmt(r.log_ratio)) + "," +
                (r.obstructed ? "1" : "0") + "\n";
    emit(c, "residual.csv", body);
    json j;
    j["degrees"] = degrees;
    j["rows"] = R.rows.size();
    j["skipped"] = R.skipped;
    j["exponent_fit"] = R.exponent_fit;
    j["fit_within_0.35"] = R.exponent_fit <= 0.35;
    j["lower_bound"] = R.lower_bound;
    j["theta_constant_terms_agree"] = R.theta_constant_terms_agree;
    j["genus_certified"] = G.certified;
    (c.cfg.out_dir.empty() ? c.err : c.out) << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_identity_suite(Ctx& c) {
    const auto rep = run_identity_suite(c.cfg.seed);
    json j;
    j["seed"] = rep.seed;
    j["identities"] = json::array();
    for (const auto& r : rep.results)
        j["identities"].push_back({{"name", r.name},
                                   {"grid", r.grid},
                                   {"cases", r.cases},
                                   {"failures", r.failures},
                                   {"max_residual", r.max_residual},
                                   {"pass", r.pass()}});
    j["unary_theta_eigenvalue"] = {rep.unary_theta_eigenvalue.real(), rep.unary_theta_eigenvalue.imag()};
    j["pass"] = rep.pass();
    emit(c, "identity_suite.json", j.dump(2) + "\n");
    return rep.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_worked_example(Ctx& c) {
    const auto Q1 = example_form_q1(), Q2 = example_form_q2();
    const auto& F = Q1.field();
    const Poly T = Poly::T(F);
    const Poly Pd = Poly::from_ints(F, {1, 1, 0, 1});
    int failed = 0;
    auto line = [&](bool ok, const std::string& what) {
        c.out << (ok ? "PASS " : "FAIL ") << what << "\n";
        if (!ok) ++failed;
    };

    const auto k1 = kohnen_symbol(Q1, Pd), k2 = kohnen_symbol(Q2, Pd);
    line(same_genus(Q1, Q2) && k1.value == SymbolValue::Plus && k2.value == SymbolValue::Plus,
         "same genus; Kohnen symbols at T^3+T+1: " + std::to_string(to_int(k1.value)) + ", " +
             std::to_string(to_int(k2.value)));

    const auto R = representations(Q2, T);
    Vec3 w{Poly(F), Poly::constant(F, 1), Poly(F)};
    const bool has_w = std::find(R.solutions.begin(), R.solutions.end(), w) != R.solutions.end();
    line(R.count() >= 1 && has_w, "Q2 represents T: r = " + std::to_string(R.count()) + ", witness (0,1,0)");

    const auto counts = theta_counts(Q1, 1);
    int nonzero = 0, checked = 0;
    for (std::uint64_t idx = F.p(); idx < F.p() * F.p(); ++idx, ++checked)
        if (counts[idx] != 0) ++nonzero;
    line(nonzero == 0 && checked == 20, "Q1 represents no degree-1 D (" + std::to_string(checked) + " checked)");

    // T is locally represented everywhere by Q1 yet has no global representation
    const auto obs = local_obstruction_check(Q1, T);
    line(!obs.obstructed() && counts[poly_index(T)] == 0 && R.count() >= 1,
         "no local-global principle: T locally represented by Q1 at every place, r_Q1(T) = 0");
    c.out << (failed ? "worked-example FAIL" : "worked-example PASS") << "\n";
    return failed ? kExitCheckFailed : kExitOk;
}

int cmd_bench(Ctx& c) {
    using clock = std::chrono::steady_clock;
    const auto& F = field_of(c);
    std::mt19937_64 rng(c.cfg.seed);
    // kernel throughput on a z table of degree 3
    ZTable t;
    t.p = F.p();
    t.out_deg = 3;
    t.vlen = 6;
    t.zlen = 4;
    t.count = 1;
    for (int i = 0; i < t.zlen; ++i) t.count *= F.p();
    t.stride = (t.count + 7) / 8 * 8;
    t.z.assign(t.zlen * t.stride, 0);
    t.sq.assign(t.vlen * t.stride, 0);
    for (auto& x : t.z) x = static_cast<std::int32_t>(rng() % F.p());
    for (auto& x : t.sq) x = static_cast<std::int32_t>(rng() % F.p());
    std::vector<std::int32_t> c0(t.vlen), l(t.vlen), keys(t.count);
    for (auto& x : c0) x = static_cast<std::int32_t>(rng() % F.p());
    for (auto& x : l) x = static_cast<std::int32_t>(rng() % F.p());
    json j;
    j["p"] = F.p();
    j["avx2_available"] = cpu_has_avx2();
    j["selected_kernel"] = kernel_name(select_kernel(t, t.vlen));
    auto run = [&](EvalKeysFn fn) {
        const int reps = std::max<int>(1, static_cast<int>(20'000'000 / std::max<std::size_t>(t.count, 1)));
        const auto t0 = clock::now();
        std::int64_t sink = 0;
        for (int r = 0; r < reps; ++r) {
            c0[0] = r % F.p();
            fn(t, c0.data(), l.data(), t.vlen, keys.data());
            sink += keys[r % t.count];
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        return std::pair{reps * static_cast<double>(t.count) / secs, sink};
    };
    j["kernel_vectors_per_sec"]["scalar"] = run(eval_keys_scalar).first;
    if (cpu_has_avx2() && avx2_fits(t, t.vlen)) j["kernel_vectors_per_sec"]["avx2"] = run(eval_keys_avx2).first;

    // end to end enumeration on the example form
    if (F.p() == 5) {
        const auto Q = example_form_q1();
        const auto B = coordinate_bounds(Q, 5);
        double box = 1;
        for (int b : B) box *= std::pow(5.0, b + 1);
        const auto t0 = clock::now();
        theta_counts(Q, 5, c.cfg.threads);
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        j["theta_counts_deg5_vectors_per_sec"] = box / secs;
    }

    // character sums by enumeration
    const int deg = 5, n = 4;
    std::vector<Poly> Ds;
    while (Ds.size() < 20) {
        Poly D = Poly::monomial(F, 1, deg);
        for (int i = 0; i < deg; ++i) D += Poly::monomial(F, static_cast<std::int64_t>(rng() % F.p()), i);
        if (is_squarefree(D)) Ds.push_back(D);
    }
    const auto t1 = clock::now();
    long long sink = 0;
    for (const auto& D : Ds) sink += char_sum_direct(D, n);
    const double secs = std::chrono::duration<double>(clock::now() - t1).count();
    j["char_sums_per_sec"] = Ds.size() / secs;
    j["char_sum_terms_per_sec"] = Ds.size() * std::pow(static_cast<double>(F.p()), n) / secs;
    j["checksum"] = sink;
    c.out << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"arqft: representation numbers of ternary forms over F_p[T]"};
    app.require_subcommand(1);
    RunConfig cfg;
    cfg.threads = default_workers();
    cfg.cache_dir = default_cache_dir();

    auto common = [&](CLI::App* s) {
        s->add_option("--p", cfg.p, "prime, p = 1 mod 4");
        s->add_option("--seed", cfg.seed, "rng seed");
        s->add_option("--threads", cfg.threads, "worker count");
        s->add_option("--tol", cfg.tol, "numeric tolerance");
        s->add_option("--cache-dir", cfg.cache_dir, "cache directory (default $ARQFT_CACHE)");
        s->add_option("--out-dir", cfg.out_dir, "write artifacts here instead of stdout");
        s->add_option("--budget", cfg.budget, "enumeration budget in vectors");
    };

    std::string D_text, form, degs = "3,5";
    int deg = -1, maxdeg = 5;
    bool all = false, solutions = false;
    std::size_t sample = 0, limit = 0;

    auto* lfun = app.add_subcommand("lfun", "L-polynomial rows");
    auto* zeros = app.add_subcommand("zeros", "zero angles");
    auto* family = app.add_subcommand("family", "family sweep summary");
    for (auto* s : {lfun, zeros, family}) {
        common(s);
        s->add_option("--deg", deg, "degree");
        s->add_flag("--all", all, "every square-free monic D of the degree");
    }
    for (auto* s : {lfun, zeros}) s->add_option("--D", D_text, "discriminant polynomial");
    family->add_option("--sample", sample, "seeded sample size");

    auto* rep = app.add_subcommand("rep", "representation numbers");
    auto* aut = app.add_subcommand("auto", "automorphism count");
    auto* genus = app.add_subcommand("genus", "genus classes by neighbor walk");
    auto* mass = app.add_subcommand("mass", "Siegel ratio report");
    auto* residual = app.add_subcommand("residual", "residual table and exponent fit");
    for (auto* s : {rep, aut, genus, mass, residual}) {
        common(s);
        s->add_option("--form", form, "form JSON file")->required();
    }
    rep->add_option("--D", D_text, "target polynomial");
    rep->add_option("--deg", deg, "degree");
    rep->add_flag("--all", all, "every D of the degree");
    rep->add_flag("--solutions", solutions, "list the vectors");
    mass->add_option("--degs", degs, "comma-separated degrees");
    mass->add_option("--limit", limit, "admissible D per degree, 0 for all");
    residual->add_option("--maxdeg", maxdeg, "largest degree");

    auto* ident = app.add_subcommand("identity-suite", "spectral and symbol identities");
    auto* worked = app.add_subcommand("worked-example", "worked example storyline");
    auto* bench = app.add_subcommand("bench", "throughput");
    for (auto* s : {ident, worked, bench}) common(s);

    // CLI11 wants the arguments reversed, program name dropped
    std::vector<std::string> rev;
    if (!args.empty()) rev.assign(args.rbegin(), args.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }

    Ctx c{cfg, false, out, err, DiskCache()};
    for (auto* s : app.get_subcommands()) c.p_given = s->count("--p") > 0;
    try {
        if (!(cfg.tol > 0)) throw PreconditionError("--tol must be positive");
        if (cfg.threads == 0) throw PreconditionError("--threads must be positive");
        PrimeModulus::get(cfg.p);
        c.cache = DiskCache(cfg.cache_dir);
        if (lfun->parsed()) return cmd_lfun(c, D_text, deg, all);
        if (zeros->parsed()) return cmd_zeros(c, D_text, deg, all);
        if (family->parsed()) return cmd_family(c, deg, all, sample);
        if (rep->parsed()) return cmd_rep(c, form, D_text, deg, all, solutions);
        if (aut->parsed()) return cmd_auto(c, form);
        if (genus->parsed()) return cmd_genus(c, form);
        if (mass->parsed()) return cmd_mass(c, form, degs, limit);
        if (residual->parsed()) return cmd_residual(c, form, maxdeg);
        if (ident->parsed()) return cmd_identity_suite(c);
        if (worked->parsed()) return cmd_worked_example(c);
        if (bench->parsed()) return cmd_bench(c);
    } catch (const CheckFailure& e) {
        err << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        err << "precondition: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitPrecondition;
}

}  // namespace arqft
