// Command-line workbench. Every subcommand reads and writes f2ext/1 JSON.
//
// Exit codes: 0 success or found, 1 usage or parse error, 2 budget exhausted
// (a checkpoint was written), 3 definite failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "f2ext/f2ext.hpp"

namespace {

using f2ext::io::json;

enum Exit { ok = 0, usage = 1, resumable = 2, failed = 3 };

struct RunConfig {
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    std::optional<double> budget_seconds;
    std::string out;
    std::string format = "json";
    std::string resume;
    std::string checkpoint;

    std::uint64_t rng_seed() const {
        if (seed) return *seed;
        if (const char* env = std::getenv("F2EXT_SEED")) {
            try {
                return std::stoull(env, nullptr, 0);
            } catch (const std::logic_error&) {
                throw f2ext::parse_error("F2EXT_SEED is not an integer");
            }
        }
        return 0;
    }
};

std::string read_text(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path);
    if (!in) throw f2ext::parse_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const std::string& path) { return f2ext::io::parse(read_text(path)); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw f2ext::parse_error("cannot write " + path);
    out << text;
}

// CSV keeps the scalar top-level fields, one key,value row each.
std::string render(const json& j, const std::string& format) {
    if (format == "json") return f2ext::io::dump(j);
    std::ostringstream s;
    s << "key,value\n";
    for (const auto& [k, v] : j.items()) {
        if (v.is_structured()) continue;
        s << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    return s.str();
}

void emit(const RunConfig& cfg, const json& j) {
    const std::string text = render(j, cfg.format);
    if (cfg.out.empty()) std::cout << text;
    else write_text(cfg.out, text);
}

std::vector<std::uint64_t> parse_bit_list(const std::string& s, std::size_t n) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(f2ext::io::parse_bits(item, n));
    return out;
}

/// A polymap, a distribution, or a NOBF source, as a distribution.
f2ext::DiscreteDistribution as_distribution(const json& j) {
    const auto type = j.value("type", "");
    if (type == "polymap") return f2ext::distribution_of(f2ext::io::polymap_from_json(j));
    if (type == "nobf") return f2ext::distribution_of(f2ext::io::nobf_from_json(j).to_polymap());
    return f2ext::io::distribution_from_json(j);
}

/// A support set or the support of a NOBF source / polymap image.
f2ext::SupportSet as_support(const json& j) {
    const auto type = j.value("type", "");
    if (type == "nobf") return f2ext::support_of(f2ext::io::nobf_from_json(j));
    if (type == "polymap") {
        const auto p = f2ext::io::polymap_from_json(j);
        const auto tt = f2ext::truth_table(p);
        return f2ext::SupportSet(p.num_outputs(), tt.values);
    }
    return f2ext::io::support_from_json(j);
}

struct ParamFlags {
    std::string file;
    std::size_t d = 1, ell = 2, n0 = 2, r = 1, t = 2;
    std::string k0 = "2", eps = "0";

    void add(CLI::App* app) {
        app->add_option("--params", file, "search_params JSON file");
        app->add_option("--d", d, "source degree");
        app->add_option("--ell", ell, "source input bits");
        app->add_option("--n0", n0, "source output bits");
        app->add_option("--k0", k0, "entropy threshold (p/q)");
        app->add_option("--r", r, "extractor output bits");
        app->add_option("--eps", eps, "target error (p/q)");
        app->add_option("--t", t, "independence of the family");
    }
    f2ext::SearchParams get() const {
        if (!file.empty()) return f2ext::io::params_from_json(read_json(file));
        f2ext::SearchParams p;
        p.d = d;
        p.ell = ell;
        p.n0 = n0;
        p.k0 = f2ext::parse_rational(k0);
        p.r = r;
        p.eps = f2ext::parse_rational(eps);
        p.t = t;
        return p;
    }
};

int cmd_search(const RunConfig& cfg, const ParamFlags& pf, std::uint64_t chunk) {
    const auto params = pf.get();
    f2ext::SearchOptions opt;
    opt.workers = cfg.workers;
    opt.budget_seconds = cfg.budget_seconds;
    opt.chunk = chunk;
    if (!cfg.resume.empty()) {
        auto [ck, p] = f2ext::io::checkpoint_from_json(read_json(cfg.resume));
        if (!(p == params)) throw f2ext::precondition_error("checkpoint belongs to different parameters");
        opt.resume = ck;
    }
    const std::string ckpath = !cfg.checkpoint.empty() ? cfg.checkpoint
                               : !cfg.out.empty()      ? cfg.out + ".ckpt"
                                                       : std::string("f2ext-search.ckpt");
    std::optional<f2ext::Checkpoint> last;
    opt.on_checkpoint = [&](const f2ext::Checkpoint& c) { last = c; };
    const auto rep = f2ext::algorithm1_search(params, opt);
    json j = f2ext::io::to_json(rep);
    if (rep.status == f2ext::SearchStatus::budget_exhausted && last) {
        write_text(ckpath, f2ext::io::dump(f2ext::io::to_json(*last, params)));
        j["checkpoint"] = ckpath;
    }
    emit(cfg, j);
    switch (rep.status) {
        case f2ext::SearchStatus::found: return ok;
        case f2ext::SearchStatus::budget_exhausted: return resumable;
        default: return failed;
    }
}

int cmd_verify(const RunConfig& cfg, const ParamFlags& pf, const std::string& member_file) {
    const auto params = pf.get();
    const json mj = read_json(member_file);
    // Accept a bare member or a search report that found one.
    const auto member = mj.value("type", "") == "search_report" ? f2ext::io::member_from_json(mj.at("member"))
                                                                 : f2ext::io::member_from_json(mj);
    const auto rep = f2ext::verify_extractor(member, params);
    emit(cfg, f2ext::io::to_json(rep));
    return rep.status == f2ext::SearchStatus::found ? ok : failed;
}

int cmd_entropy(const RunConfig& cfg, const std::string& input, const std::string& k) {
    const auto d = as_distribution(read_json(input));
    json j = f2ext::io::document("entropy");
    const auto exact = f2ext::exact_min_entropy(d);
    j["min_entropy"] = exact ? json(f2ext::to_string(*exact)) : json(nullptr);
    j["min_entropy_float"] = f2ext::min_entropy(d);
    j["max_count"] = d.max_count().str();
    j["den"] = d.denominator().str();
    if (!k.empty()) {
        j["k"] = k;
        j["at_least_k"] = f2ext::has_min_entropy_at_least(d, f2ext::parse_rational(k));
    }
    emit(cfg, j);
    return ok;
}

int cmd_distance(const RunConfig& cfg, const std::string& a, const std::string& b, std::optional<std::size_t> uniform) {
    const auto da = as_distribution(read_json(a));
    json j = f2ext::io::document("distance");
    if (uniform) {
        f2ext::io::put_rational(j, "distance", f2ext::distance_to_uniform(da, *uniform));
    } else {
        if (b.empty()) throw CLI::ValidationError("distance needs --b or --uniform");
        f2ext::io::put_rational(j, "distance", f2ext::statistical_distance(da, as_distribution(read_json(b))));
    }
    emit(cfg, j);
    return ok;
}

int cmd_reduce(const RunConfig& cfg, const std::string& input, std::size_t k, std::optional<std::size_t> ell_target,
               int attempts) {
    const auto p = f2ext::io::polymap_from_json(read_json(input));
    std::mt19937_64 rng(cfg.rng_seed());
    const std::size_t target = ell_target.value_or(f2ext::reduction_target_length(k));
    try {
        const auto res = f2ext::reduce_source(p, k, target, rng, attempts, cfg.workers);
        json j = f2ext::io::to_json(res);
        j["ell_target"] = target;
        j["stated_bound"] = f2ext::reduction_stated_bound(k);
        emit(cfg, j);
        return ok;
    } catch (const f2ext::reduction_failure& e) {
        json j = f2ext::io::document("reduction_failure");
        j["message"] = e.what();
        j["best_L"] = e.best_l.to_strings();
        f2ext::io::put_rational(j, "best_good_fraction", e.best_good_fraction);
        emit(cfg, j);
        return failed;
    }
}

int cmd_sidon(const RunConfig& cfg, std::size_t t) {
    const auto x = f2ext::sidon_source(t);
    const auto supp = f2ext::support_of(x);
    json j = f2ext::io::to_json(x);
    j["support_size"] = supp.size();
    j["support_digest"] = f2ext::io::hex(f2ext::io::fnv1a(f2ext::io::to_json(supp).dump()));
    j["is_sidon"] = f2ext::is_sidon(supp);
    const auto h = f2ext::exact_min_entropy(f2ext::distribution_of(x.to_polymap()));
    j["min_entropy"] = h ? json(f2ext::to_string(*h)) : json(nullptr);
    emit(cfg, j);
    return ok;
}

int cmd_nobf(const RunConfig& cfg, const std::string& input, std::size_t k, std::size_t n, std::size_t degree) {
    f2ext::NOBFSource x;
    if (!input.empty()) {
        x = f2ext::io::nobf_from_json(read_json(input));
    } else {
        if (n < k) throw CLI::ValidationError("nobf needs n >= k");
        std::mt19937_64 rng(cfg.rng_seed());
        std::vector<f2ext::MultilinearPoly> bad;
        for (std::size_t i = k; i < n; ++i) bad.push_back(f2ext::random_poly(k, std::min(degree, k), rng));
        x = f2ext::NOBFSource::with_default_layout(k, std::move(bad));
    }
    json j = f2ext::io::to_json(x);
    j["variety_witness"] = f2ext::io::to_json(x.variety_witness());
    const auto h = f2ext::exact_min_entropy(f2ext::distribution_of(x.to_polymap()));
    j["min_entropy"] = h ? json(f2ext::to_string(*h)) : json(nullptr);
    j["support"] = f2ext::io::to_json(f2ext::support_of(x));
    emit(cfg, j);
    return ok;
}

int cmd_find_sumset(const RunConfig& cfg, const std::string& input, std::size_t sa, std::size_t sb) {
    const auto t = as_support(read_json(input));
    const auto w = f2ext::find_sumset_in_set(t, sa, sb, cfg.workers);
    json j = f2ext::io::document("sumset_witness");
    j["found"] = w.has_value();
    j["a"] = w ? f2ext::io::set_json(t.n(), w->a) : json(nullptr);
    j["b"] = w ? f2ext::io::set_json(t.n(), w->b) : json(nullptr);
    emit(cfg, j);
    return ok;
}

int cmd_find_affine(const RunConfig& cfg, const std::string& input, std::size_t cap) {
    const auto t = as_support(read_json(input));
    const auto r = f2ext::largest_affine_in_set(t, cap);
    json j = f2ext::io::document("affine_witness");
    j["dim"] = r.dim;
    j["witness"] = f2ext::io::subspace_json(r.witness);
    emit(cfg, j);
    return ok;
}

int cmd_certify(const RunConfig& cfg, const std::string& input, std::size_t m, std::size_t outputs, std::size_t r) {
    f2ext::PolyMap p;
    if (!input.empty()) {
        p = f2ext::io::polymap_from_json(read_json(input));
    } else {
        std::mt19937_64 rng(cfg.rng_seed());
        p = f2ext::random_map(m, outputs, 2, rng);
    }
    json j = f2ext::io::document("certificate");
    j["map"] = f2ext::io::to_json(p);
    j["r"] = r;
    const auto w = r == 0 ? std::optional<f2ext::SubspacePair>{} : f2ext::find_constant_sumset_pair(p, r);
    j["certified"] = f2ext::certify_no_affine_sumset(p, r);
    if (w) j["witness"] = {{"u", f2ext::io::subspace_json(w->u)}, {"v", f2ext::io::subspace_json(w->v)}};
    else j["witness"] = nullptr;
    emit(cfg, j);
    return ok;
}

int cmd_structure(const RunConfig& cfg, const std::string& input, const std::string& y, const std::string& a,
                  const std::string& b) {
    const auto p = f2ext::io::polymap_from_json(read_json(input));
    const std::size_t m = p.num_vars();
    const f2ext::F2Vector yv = y.empty() ? f2ext::F2Vector(p.num_outputs()) : f2ext::F2Vector::parse(y);
    const f2ext::SupportSet sa(m, parse_bit_list(a, m));
    const f2ext::SupportSet sb(m, parse_bit_list(b, m));
    const auto res = f2ext::sumset_structure_affine(p, yv, sa, sb);
    json j = f2ext::io::document("structure");
    j["u"] = f2ext::io::subspace_json(res.u);
    j["v"] = f2ext::io::subspace_json(res.v);
    emit(cfg, j);
    return ok;
}

int cmd_biclique(const RunConfig& cfg, const std::string& input, std::size_t s, std::size_t n, double p) {
    std::optional<f2ext::BipartiteGraph> g;
    if (!input.empty()) {
        g = f2ext::io::graph_from_json(read_json(input));
    } else {
        std::mt19937_64 rng(cfg.rng_seed());
        g.emplace(n, n);
        const auto cut = static_cast<std::uint64_t>(p * 18446744073709551615.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (static_cast<std::uint64_t>(rng()) < cut) g->add_edge(i, k);
    }
    const auto w = f2ext::find_biclique(*g, s);
    json j = f2ext::io::document("biclique");
    j["graph"] = f2ext::io::to_json(*g);
    j["edges"] = g->edge_count();
    j["znam_bound"] = f2ext::znam_bound(static_cast<double>(std::max(g->left(), g->right())), static_cast<double>(s));
    j["found"] = w.has_value();
    j["rows"] = w ? json(w->rows) : json(nullptr);
    j["cols"] = w ? json(w->cols) : json(nullptr);
    emit(cfg, j);
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"f2ext: extractors and lower bounds for polynomial sources over F2"};
    app.require_subcommand(1);
    // Global flags may follow the subcommand name.
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "RNG seed (overrides F2EXT_SEED)");
    app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--budget-seconds", cfg.budget_seconds, "wall-clock budget for searches");
    app.add_option("--out", cfg.out, "write the result here instead of stdout");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--resume", cfg.resume, "resume a search from this checkpoint");
    app.add_option("--checkpoint", cfg.checkpoint, "checkpoint path for searches");

    std::function<int()> run;

    ParamFlags search_flags;
    std::uint64_t chunk = 64;
    auto* search = app.add_subcommand("search", "exhaustive extractor search over the hash family");
    search_flags.add(search);
    search->add_option("--chunk", chunk, "seeds per checkpoint block")->check(CLI::PositiveNumber);
    search->callback([&] { run = [&] { return cmd_search(cfg, search_flags, chunk); }; });

    ParamFlags verify_flags;
    std::string member;
    auto* verify = app.add_subcommand("verify", "re-verify a family member against every eligible source");
    verify_flags.add(verify);
    verify->add_option("--member", member, "family_member or search_report JSON")->required();
    verify->callback([&] { run = [&] { return cmd_verify(cfg, verify_flags, member); }; });

    std::string input, input_b, k_str;
    auto* entropy = app.add_subcommand("entropy", "exact min-entropy");
    entropy->add_option("--input", input, "polymap, distribution or nobf JSON")->required();
    entropy->add_option("--k", k_str, "also decide H_inf >= k");
    entropy->callback([&] { run = [&] { return cmd_entropy(cfg, input, k_str); }; });

    std::optional<std::size_t> uniform;
    auto* distance = app.add_subcommand("distance", "exact statistical distance");
    distance->add_option("--a", input, "first distribution")->required();
    distance->add_option("--b", input_b, "second distribution");
    distance->add_option("--uniform", uniform, "compare against uniform on this many bits");
    distance->callback([&] { run = [&] { return cmd_distance(cfg, input, input_b, uniform); }; });

    std::size_t k = 1;
    std::optional<std::size_t> ell_target;
    int attempts = 64;
    auto* reduce = app.add_subcommand("reduce", "input reduction by a random linear fixing");
    reduce->add_option("--input", input, "polymap JSON")->required();
    reduce->add_option("--k", k, "entropy parameter");
    reduce->add_option("--ell-target", ell_target, "kept input bits (default 7k + 4)");
    reduce->add_option("--attempts", attempts, "restriction attempts");
    reduce->callback([&] { run = [&] { return cmd_reduce(cfg, input, k, ell_target, attempts); }; });

    std::size_t t = 4;
    auto* sidon = app.add_subcommand("sidon", "the degree-2 Sidon NOBF source");
    sidon->add_option("--t", t, "good bits")->required();
    sidon->callback([&] { run = [&] { return cmd_sidon(cfg, t); }; });

    std::size_t n = 8, degree = 2;
    auto* nobf = app.add_subcommand("nobf", "describe a NOBF source or sample a random one");
    nobf->add_option("--input", input, "nobf JSON");
    nobf->add_option("--k", k, "good bits");
    nobf->add_option("--n", n, "total bits");
    nobf->add_option("--degree", degree, "degree of the bad polynomials");
    nobf->callback([&] { run = [&] { return cmd_nobf(cfg, input, k, n, degree); }; });

    std::size_t sa = 2, sb = 3;
    auto* fs = app.add_subcommand("find-sumset", "A + B inside a set");
    fs->add_option("--input", input, "support_set, nobf or polymap JSON")->required();
    fs->add_option("--sa", sa, "|A|");
    fs->add_option("--sb", sb, "|B|");
    fs->callback([&] { run = [&] { return cmd_find_sumset(cfg, input, sa, sb); }; });

    std::size_t cap = 4;
    auto* fa = app.add_subcommand("find-affine", "largest affine subspace inside a set");
    fa->add_option("--input", input, "support_set, nobf or polymap JSON")->required();
    fa->add_option("--cap", cap, "dimension cap");
    fa->callback([&] { run = [&] { return cmd_find_affine(cfg, input, cap); }; });

    std::size_t m = 6, outputs = 3, r = 2;
    auto* certify = app.add_subcommand("certify", "certify that a quadratic map has no affine sumset");
    certify->add_option("--input", input, "polymap JSON (otherwise a random quadratic map)");
    certify->add_option("--m", m, "inputs of the random map");
    certify->add_option("--outputs", outputs, "outputs of the random map");
    certify->add_option("--r", r, "subspace dimension");
    certify->callback([&] { run = [&] { return cmd_certify(cfg, input, m, outputs, r); }; });

    std::string y, a_list, b_list;
    auto* structure = app.add_subcommand("structure", "affine closure of a sumset relation");
    structure->add_option("--input", input, "polymap JSON of degree <= 2")->required();
    structure->add_option("--y", y, "shift (bit string; default zero)");
    structure->add_option("--a", a_list, "comma-separated bit strings")->required();
    structure->add_option("--b", b_list, "comma-separated bit strings")->required();
    structure->callback([&] { run = [&] { return cmd_structure(cfg, input, y, a_list, b_list); }; });

    std::size_t s = 2;
    double p = 0.5;
    auto* bic = app.add_subcommand("biclique", "K_{s,s} in a bipartite graph");
    bic->add_option("--input", input, "bipartite_graph JSON (otherwise random n x n)");
    bic->add_option("--s", s, "biclique size");
    bic->add_option("--n", n, "side size of the random graph");
    bic->add_option("--p", p, "edge probability of the random graph");
    bic->callback([&] { run = [&] { return cmd_biclique(cfg, input, s, n, p); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    try {
        return run();
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const f2ext::search_failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failed;
    } catch (const f2ext::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
}
