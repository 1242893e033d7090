#include "dpres/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "dpres/checker.hpp"
#include "dpres/exact.hpp"
#include "dpres/grid.hpp"
#include "dpres/io.hpp"
#include "dpres/kernels.hpp"
#include "dpres/random.hpp"
#include "dpres/reductions.hpp"
#include "dpres/treedec.hpp"
#include "dpres/twdp.hpp"
#include "dpres/vc.hpp"

namespace dpres::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

bool is_full_grid(const Instance& inst) { return inst.grid && inst.graph == build_grid(*inst.grid); }

std::size_t cover_edges(const Graph& g, const std::vector<Vertex>& cover) {
    std::vector<char> in(g.n(), 0);
    for (Vertex v : cover) in[v] = 1;
    return static_cast<std::size_t>(
        std::count_if(g.edges().begin(), g.edges().end(), [&](const Edge& e) { return in[e.a] && in[e.b]; }));
}

struct SolveConfig {
    std::string algo = "auto";
    unsigned workers = 1;
    std::optional<long long> time_limit_ms;
    std::size_t vc_threshold = 8;
};

struct Solved {
    std::string algo;
    SolveResult result;
    double ms = 0;
};

SolveResult run_algo(const std::string& algo, const Instance& inst, const SolveConfig& cfg) {
    SearchLimits limits;
    if (cfg.time_limit_ms) limits.time_limit = std::chrono::milliseconds(*cfg.time_limit_ms);
    if (algo == "brute") return brute_force_min(inst);
    if (algo == "bb") return bb_min(inst, limits);
    if (algo == "grid") {
        GridOptions opt;
        opt.workers = cfg.workers;
        return solve_grid_instance(inst, opt);
    }
    if (algo == "twdp") return dp_solve(inst);
    if (algo == "vc") {
        VcOptions opt;
        opt.workers = cfg.workers;
        return vc_solve(inst, opt);
    }
    throw PreconditionError("unknown algorithm '" + algo + "'");
}

// Resolves `auto` to a concrete algorithm and runs it.
Solved solve_instance(const Instance& inst, const SolveConfig& cfg) {
    Solved s;
    auto start = Clock::now();
    if (cfg.algo != "auto") {
        s.algo = cfg.algo;
        s.result = run_algo(cfg.algo, inst, cfg);
    } else if (is_full_grid(inst)) {
        s.algo = "grid";
        s.result = run_algo("grid", inst, cfg);
    } else {
        bool use_vc = false;
        if (inst.is_subset() && inst.graph.n() <= 256) {
            auto cover = min_vertex_cover(inst.graph);
            use_vc = cover.size() <= cfg.vc_threshold && cover_edges(inst.graph, cover) <= VcOptions{}.cover_edge_cap;
        }
        if (use_vc) {
            s.algo = "vc";
            s.result = run_algo("vc", inst, cfg);
        } else {
            try {
                s.algo = "twdp";
                s.result = run_algo("twdp", inst, cfg);
            } catch (const SizeCapError&) {
                s.algo = "bb";
                s.result = run_algo("bb", inst, cfg);
            }
        }
    }
    s.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return s;
}

int exit_code(const std::exception_ptr& ep, std::ostream& err) {
    try {
        std::rethrow_exception(ep);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return kPrecondition;
    } catch (const SizeCapError& e) {
        err << "size cap exceeded: " << e.what() << '\n';
        return kSizeCap;
    } catch (const TimeoutError& e) {
        err << "timeout: " << e.what() << '\n';
        return kTimeout;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

int cmd_solve(const std::string& path, const SolveConfig& cfg, const std::string& witness_path, std::ostream& out) {
    Instance inst = read_instance_file(path);
    Solved s = solve_instance(inst, cfg);
    const bool verified = verify_preserver(inst, s.result.witness);
    if (!witness_path.empty()) {
        std::ostringstream w;
        write_preserver(w, s.result.witness);
        write_text(witness_path, w.str());
    }
    const bool ok = verified && s.result.size == s.result.witness.size();
    out << "instance: " << path << '\n';
    out << "digest: " << instance_digest(inst) << '\n';
    out << "algo: " << s.algo << '\n';
    out << "size: " << s.result.size << '\n';
    out << "witness: " << (witness_path.empty() ? "-" : witness_path) << '\n';
    out << "time_ms: " << std::fixed << std::setprecision(3) << s.ms << '\n';
    out << "nodes: " << s.result.stats.nodes << '\n';
    out << "candidates: " << s.result.stats.candidates << '\n';
    out << "tables: " << s.result.stats.tables << '\n';
    out << "isa: " << kernels::isa_name(kernels::active_isa()) << '\n';
    if (inst.budget) out << "within_budget: " << (s.result.size <= *inst.budget ? "true" : "false") << '\n';
    out << "verified: " << (verified ? "true" : "false") << '\n';
    out << "ok: " << (ok ? "true" : "false") << '\n';
    return ok ? kOk : kFailure;
}

int cmd_verify(const std::string& inst_path, const std::string& witness_path, std::ostream& out) {
    Instance inst = read_instance_file(inst_path);
    Preserver h = read_preserver_file(witness_path);
    for (const Edge& e : h.edges)
        if (e.b >= inst.graph.n() || !inst.graph.has_edge(e.a, e.b))
            throw ParseError("witness edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " not in the host");
    auto v = first_violation(inst, h);
    out << "size: " << h.size() << '\n';
    if (v) {
        out << "violation: " << v->pair.a << ' ' << v->pair.b << '\n';
        out << "host_distance: " << v->host << '\n';
        out << "witness_distance: " << (v->sub == kUnreachable ? std::string("inf") : std::to_string(v->sub)) << '\n';
        out << "ok: false\n";
        return kFailure;
    }
    out << "ok: true\n";
    return kOk;
}

struct GenerateConfig {
    std::optional<std::size_t> alpha, ell, delta;
    bool literal = false;
};

int cmd_generate(const std::string& kind, const std::string& source, const std::string& out_path,
                 const GenerateConfig& cfg, std::ostream& out) {
    const std::string text = read_text(source);
    const std::string found = source_kind(text);
    if (found != kind) throw ParseError("source file is '" + (found.empty() ? "unknown" : found) + "', expected '" + kind + "'");
    std::string result;
    std::size_t budget = 0;
    bool certified_no = false;
    if (kind == "mwc3") {
        auto red = mwc3_to_alc(parse_mwc3(text));
        result = "# generated from mwc3 source " + digest_hex(text) + "\n" + alc_text(red.instance);
        budget = red.budget;
    } else {
        Reduction red;
        if (kind == "mcc") {
            MccOptions opt;
            opt.trivial_no_on_missing_class_edge = !cfg.literal;
            red = mcc_to_sdp(parse_mcc(text), opt);
        } else if (kind == "rsa") {
            red = rsa_to_pdp(parse_rsa(text));
        } else if (kind == "alc") {
            red = alc_to_vc3bipdp(parse_alc(text));
        } else if (kind == "bmcc") {
            BmccInstance src = parse_bmcc(text);
            GadgetParams p = default_gadget_params(src);
            if (cfg.alpha) p.alpha = *cfg.alpha;
            if (cfg.ell) p.ell = *cfg.ell;
            if (cfg.delta) p.delta = *cfg.delta;
            red = bmcc_to_sdp_core(src, p).reduction;
        } else {
            throw PreconditionError("unknown reduction '" + kind + "'");
        }
        result = instance_text(red.instance);
        budget = red.budget;
        certified_no = red.certified_no;
    }
    if (out_path.empty() || out_path == "-") {
        out << result;
    } else {
        write_text(out_path, result);
        out << "output: " << out_path << '\n';
        out << "budget: " << budget << '\n';
        out << "certified_no: " << (certified_no ? "true" : "false") << '\n';
        out << "ok: true\n";
    }
    return kOk;
}

struct BenchConfig {
    std::vector<std::string> algos{"brute", "bb", "twdp", "vc", "grid"};
    unsigned workers = 1;
    long long time_limit_ms = 10000;
};

struct BenchRow {
    std::string line;
    bool agree = true;
};

BenchRow bench_one(const fs::path& file, const BenchConfig& cfg) {
    std::ostringstream row;
    row << file.filename().string();
    Instance inst;
    try {
        inst = read_instance_file(file.string());
    } catch (const ParseError& e) {
        row << ",parse-error";
        return {row.str(), false};
    }
    const Graph& g = inst.graph;
    row << ',' << g.n() << ',' << g.m() << ',' << (inst.is_subset() ? "S" : "P") << ','
        << (inst.is_subset() ? terminal_vertices(inst.terminals).size() : pairs_of(inst.terminals).size());
    row << ',' << (g.n() <= 64 ? std::to_string(min_vertex_cover(g).size()) : std::string("-"));
    row << ',' << decompose(g).width();
    std::optional<std::size_t> agreed;
    bool agree = true;
    SolveConfig sc;
    sc.workers = 1;
    sc.time_limit_ms = cfg.time_limit_ms;
    for (const auto& algo : cfg.algos) {
        std::string cell;
        double ms = 0;
        const bool applicable = !((algo == "vc" && !inst.is_subset()) || (algo == "grid" && !is_full_grid(inst)));
        if (!applicable) {
            cell = "n/a";
        } else {
            sc.algo = algo;
            try {
                Solved s = solve_instance(inst, sc);
                ms = s.ms;
                cell = std::to_string(s.result.size);
                if (!verify_preserver(inst, s.result.witness) || s.result.witness.size() != s.result.size) {
                    cell += "!";
                    agree = false;
                }
                if (agreed && *agreed != s.result.size) agree = false;
                agreed = s.result.size;
            } catch (const TimeoutError&) {
                cell = "timeout";
            } catch (const SizeCapError&) {
                cell = "cap";
            } catch (const PreconditionError&) {
                cell = "n/a";
            }
        }
        row << ',' << cell << ',' << std::fixed << std::setprecision(3) << ms;
    }
    row << ',' << (agree ? "agree" : "DISAGREE");
    return {row.str(), agree};
}

int cmd_bench(const std::string& dir, const BenchConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    out << "file,n,m,kind,terminals,vc,tw";
    for (const auto& a : cfg.algos) out << ',' << a << "_size," << a << "_ms";
    out << ",status\n";

    std::vector<BenchRow> rows(files.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < files.size();) rows[i] = bench_one(files[i], cfg);
    };
    std::vector<std::thread> threads;
    for (unsigned t = 1; t < std::max(1u, cfg.workers); ++t) threads.emplace_back(work);
    work();
    for (auto& th : threads) th.join();

    std::size_t bad = 0;
    for (const auto& r : rows) {
        out << r.line << '\n';
        bad += !r.agree;
    }
    if (bad) err << bad << " instance(s) with solver disagreement or failure\n";
    return bad ? kFailure : kOk;
}

struct RandomConfig {
    RandomSpec spec;
    std::string grid;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

int cmd_random(RandomConfig cfg, std::ostream& out) {
    if (!cfg.grid.empty()) {
        auto x = cfg.grid.find('x');
        if (x == std::string::npos) throw ParseError("--grid expects WxH");
        cfg.spec.grid = GridSpec{parse_count(cfg.grid.substr(0, x), 0), parse_count(cfg.grid.substr(x + 1), 0)};
    }
    fs::create_directories(cfg.out_dir);
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t i = 0; i < cfg.count; ++i) {
        Instance inst = random_instance(cfg.spec, rng);
        inst.comments.push_back("random seed=" + std::to_string(cfg.seed) + " index=" + std::to_string(i));
        std::ostringstream name;
        name << "random_" << cfg.seed << '_' << std::setw(4) << std::setfill('0') << i << ".txt";
        const fs::path path = fs::path(cfg.out_dir) / name.str();
        write_text(path.string(), instance_text(inst));
        out << path.string() << '\n';
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact minimum distance preservers"};
    app.require_subcommand(1);

    SolveConfig solve_cfg;
    std::string solve_path, witness_path;
    auto* solve = app.add_subcommand("solve", "Solve an instance exactly");
    solve->add_option("instance", solve_path, "Instance file")->required();
    solve->add_option("--algo", solve_cfg.algo, "auto|brute|bb|grid|twdp|vc")
        ->check(CLI::IsMember({"auto", "brute", "bb", "grid", "twdp", "vc"}));
    solve->add_option("--witness", witness_path, "Write the witness edge list here");
    solve->add_option("--workers", solve_cfg.workers, "Worker threads");
    solve->add_option("--time-limit", solve_cfg.time_limit_ms, "Branch-and-bound time limit in ms");
    solve->add_option("--vc-threshold", solve_cfg.vc_threshold, "Largest vertex cover for which auto picks vc");

    std::string verify_inst, verify_witness;
    auto* verify = app.add_subcommand("verify", "Check a witness against an instance");
    verify->add_option("instance", verify_inst)->required();
    verify->add_option("witness", verify_witness)->required();

    std::string gen_kind, gen_source, gen_out;
    GenerateConfig gen_cfg;
    auto* generate = app.add_subcommand("generate", "Build a preserver instance from a source problem");
    generate->add_option("kind", gen_kind, "mcc|bmcc|mwc3|alc|rsa")
        ->required()
        ->check(CLI::IsMember({"mcc", "bmcc", "mwc3", "alc", "rsa"}));
    generate->add_option("source", gen_source)->required();
    generate->add_option("-o,--out", gen_out, "Output file (default stdout)");
    generate->add_option("--alpha", gen_cfg.alpha);
    generate->add_option("--ell", gen_cfg.ell);
    generate->add_option("--delta", gen_cfg.delta);
    generate->add_flag("--literal", gen_cfg.literal, "mcc: keep the literal construction for missing class edges");

    std::string bench_dir;
    BenchConfig bench_cfg;
    auto* bench = app.add_subcommand("bench", "Run all applicable solvers on a corpus and cross-check sizes");
    bench->add_option("corpus", bench_dir)->required();
    bench->add_option("--algos", bench_cfg.algos)->delimiter(',');
    bench->add_option("--workers", bench_cfg.workers);
    bench->add_option("--time-limit", bench_cfg.time_limit_ms, "Branch-and-bound time limit in ms");

    RandomConfig rnd;
    auto* random = app.add_subcommand("random", "Write a seeded random corpus");
    random->add_option("--n", rnd.spec.n);
    random->add_option("--m", rnd.spec.m);
    random->add_option("--terminals", rnd.spec.terminals);
    random->add_option("--pairs", rnd.spec.pairs);
    random->add_option("--grid", rnd.grid, "WxH full grid host");
    random->add_option("--count", rnd.count);
    random->add_option("--seed", rnd.seed);
    random->add_option("--out", rnd.out_dir, "Output directory");
    random->add_flag("--connected", rnd.spec.connected);

    std::vector<std::string> argv_store{"dpres"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kFailure;
    }

    try {
        if (*solve) return cmd_solve(solve_path, solve_cfg, witness_path, out);
        if (*verify) return cmd_verify(verify_inst, verify_witness, out);
        if (*generate) return cmd_generate(gen_kind, gen_source, gen_out, gen_cfg, out);
        if (*bench) return cmd_bench(bench_dir, bench_cfg, out, err);
        if (*random) return cmd_random(rnd, out);
    } catch (...) {
        return exit_code(std::current_exception(), err);
    }
    return kFailure;
}

} // namespace dpres::cli
