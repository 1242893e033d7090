#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "dpres/cli.hpp"
#include "dpres/io.hpp"
#include "dpres/reductions.hpp"

namespace fs = std::filesystem;
using namespace dpres;

namespace {

struct Run {
    int code = 0;
    std::string out, err;

    // key: value lines of the report
    std::map<std::string, std::string> report() const {
        std::map<std::string, std::string> kv;
        std::istringstream in(out);
        std::string line;
        while (std::getline(in, line)) {
            auto colon = line.find(": ");
            if (colon != std::string::npos) kv[line.substr(0, colon)] = line.substr(colon + 2);
        }
        return kv;
    }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("dpres_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& text) const {
        auto p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("solve grid pair") {
    TempDir tmp;
    auto inst = tmp.file("pair.txt", "grid 5 5\nP (0,0) (4,4)\n");
    Run r = run({"solve", "--algo", "grid", inst});
    CHECK(r.code == cli::kOk);
    auto kv = r.report();
    CHECK(kv["size"] == "8");
    CHECK(kv["algo"] == "grid");
    CHECK(kv["ok"] == "true");
    CHECK(kv["digest"].size() == 16);
    for (const char* key : {"instance", "witness", "time_ms", "nodes", "candidates", "tables", "isa", "verified"})
        CHECK(kv.count(key) == 1);
    CHECK(r.out.substr(r.out.size() - 9) == "ok: true\n");
}

TEST_CASE("solve auto on a star picks the cover solver") {
    TempDir tmp;
    auto inst = tmp.file("star.txt", "g 4\ne 0 1\ne 0 2\ne 0 3\nS 1 2 3\nk 3\n");
    auto wit = tmp.path("star.wit");
    Run r = run({"solve", "--algo", "auto", inst, "--witness", wit});
    CHECK(r.code == cli::kOk);
    auto kv = r.report();
    CHECK(kv["size"] == "3");
    CHECK(kv["algo"] == "vc");
    CHECK(kv["within_budget"] == "true");
    CHECK(slurp(wit) == "size 3\ne 0 1\ne 0 2\ne 0 3\n");
    CHECK(run({"verify", inst, wit}).code == cli::kOk);
}

TEST_CASE("solve auto picks grid and the dp on other inputs") {
    TempDir tmp;
    CHECK(run({"solve", tmp.file("g.txt", "grid 3 3\nS (0,0) (2,2)\n")}).report()["algo"] == "grid");
    auto pairs = tmp.file("p.txt", "g 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\nP 0 2\n");
    CHECK(run({"solve", pairs}).report()["algo"] == "twdp");
    auto big_cover = tmp.file("k.txt", "g 4\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\nS 0 1\n");
    auto kv = run({"solve", "--vc-threshold", "1", big_cover}).report();
    CHECK(kv["algo"] == "twdp");
    CHECK(kv["size"] == "1");
}

TEST_CASE("all algorithms agree on a small instance") {
    TempDir tmp;
    auto inst = tmp.file("c6.txt", "g 6\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 0\nS 0 2 4\n");
    for (const char* algo : {"brute", "bb", "twdp", "vc", "auto"}) {
        Run r = run({"solve", "--algo", algo, inst});
        INFO(algo);
        CHECK(r.code == cli::kOk);
        CHECK(r.report()["size"] == "6");
    }
}

TEST_CASE("solve error codes") {
    TempDir tmp;
    CHECK(run({"solve", tmp.file("bad.txt", "g 3\ne 0 7\n")}).code == cli::kParseError);
    CHECK(run({"solve", tmp.path("missing.txt")}).code == cli::kParseError);
    auto plain = tmp.file("plain.txt", "g 3\ne 0 1\ne 1 2\nS 0 2\n");
    CHECK(run({"solve", "--algo", "grid", plain}).code == cli::kPrecondition);
    auto pairs = tmp.file("pairs.txt", "g 3\ne 0 1\ne 1 2\nP 0 2\n");
    CHECK(run({"solve", "--algo", "vc", pairs}).code == cli::kPrecondition);
    std::ostringstream k9;
    k9 << "g 9\n";
    for (int u = 0; u < 9; ++u)
        for (int v = u + 1; v < 9; ++v) k9 << "e " << u << ' ' << v << '\n';
    k9 << "S 0 1 2 3 4 5 6 7 8\n";
    CHECK(run({"solve", "--algo", "brute", tmp.file("k9.txt", k9.str())}).code == cli::kSizeCap);
    std::ostringstream grid;
    grid << "grid 12 12\n";
    for (int i = 0; i < 11; ++i) grid << "P (" << i << ",0) (" << 11 - i << ",11)\n";
    CHECK(run({"solve", "--algo", "bb", "--time-limit", "1", tmp.file("slow.txt", grid.str())}).code == cli::kTimeout);
    CHECK(run({"solve", "--algo", "nope", plain}).code == cli::kFailure);
}

TEST_CASE("verify") {
    TempDir tmp;
    auto inst = tmp.file("p.txt", "g 3\ne 0 1\ne 1 2\nS 0 2\n");
    CHECK(run({"verify", inst, tmp.file("full.wit", "size 2\ne 0 1\ne 1 2\n")}).code == cli::kOk);
    Run bad = run({"verify", inst, tmp.file("part.wit", "e 0 1\n")});
    CHECK(bad.code == cli::kFailure);
    CHECK(bad.report()["violation"] == "0 2");
    CHECK(bad.report()["witness_distance"] == "inf");
    auto none = tmp.file("none.txt", "g 3\ne 0 1\n");
    CHECK(run({"verify", none, tmp.file("empty.wit", "")}).code == cli::kOk);
    CHECK(run({"verify", inst, tmp.file("junk.wit", "e 0\n")}).code == cli::kParseError);
    CHECK(run({"verify", inst, tmp.file("foreign.wit", "e 0 2\n")}).code == cli::kParseError);
}

TEST_CASE("generate") {
    TempDir tmp;
    Run mcc = run({"generate", "mcc", tmp.file("tri.mcc", "mcc\ng 3\ne 0 1\ne 0 2\ne 1 2\nclass 0\nclass 1\nclass 2\n")});
    CHECK(mcc.code == cli::kOk);
    Instance target = parse_instance_text(mcc.out);
    CHECK(target.budget == std::optional<std::size_t>{6});
    CHECK(mcc.out.find("k 6\n") != std::string::npos);
    CHECK(mcc.out.rfind("# generated from mcc source ", 0) == 0);

    auto out = tmp.path("rsa.txt");
    Run rsa = run({"generate", "rsa", tmp.file("pts.rsa", "rsa\np 2 0\np 0 2\nk 4\n"), "-o", out});
    CHECK(rsa.code == cli::kOk);
    CHECK(rsa.report()["budget"] == "4");
    Instance grid = read_instance_file(out);
    CHECK(grid.grid.has_value());
    for (const auto& p : pairs_of(grid.terminals)) CHECK(p.a == 0);
    CHECK(run({"solve", out}).report()["size"] == "4");

    auto alc = tmp.path("star.alc");
    Run mwc = run({"generate", "mwc3", tmp.file("star.mwc3", "mwc3\ng 4\ne 0 1\ne 0 2\ne 0 3\nterminals 1 2 3\nk 2\n"),
                   "-o", alc});
    CHECK(mwc.code == cli::kOk);
    CHECK(mwc.report()["budget"] == "17");
    AlcInstance chained = parse_alc(slurp(alc));
    CHECK(chained.graph.n() == 15);
    Run pdp = run({"generate", "alc", alc});
    CHECK(pdp.code == cli::kOk);
    CHECK(parse_instance_text(pdp.out).graph.n() == 18);

    auto bm = tmp.file("one.bmcc", "bmcc\ng 2\ne 0 1\nL 0\nR 1\n");
    CHECK(run({"generate", "bmcc", bm}).code == cli::kOk);
    CHECK(run({"generate", "bmcc", bm, "--ell", "10"}).code == cli::kPrecondition);
    CHECK(run({"generate", "mcc", tmp.file("bad.mcc", "mcc\ng 2\ne 0 1\nclass 0 1\n")}).code == cli::kParseError);
    CHECK(run({"generate", "mcc", bm}).code == cli::kParseError);

    Run lit = run({"generate", "mcc", tmp.file("gap.mcc", "mcc\ng 2\nclass 0\nclass 1\n"), "--literal"});
    CHECK(lit.code == cli::kOk);
    Instance lit_inst = parse_instance_text(lit.out);
    CHECK(lit_inst.graph.n() == 4);
    CHECK_FALSE(lit_inst.budget.has_value());
}

TEST_CASE("random and bench") {
    TempDir tmp;
    auto corpus = tmp.dir() + "/corpus";
    Run gen = run({"random", "--n", "8", "--m", "12", "--terminals", "3", "--count", "12", "--seed", "5", "--out", corpus});
    CHECK(gen.code == cli::kOk);
    CHECK(fs::exists(corpus + "/random_5_0000.txt"));
    CHECK(fs::exists(corpus + "/random_5_0011.txt"));
    Run again = run({"random", "--n", "8", "--m", "12", "--terminals", "3", "--count", "12", "--seed", "5", "--out",
                     tmp.dir() + "/again"});
    CHECK(slurp(corpus + "/random_5_0007.txt") == slurp(tmp.dir() + "/again/random_5_0007.txt"));
    run({"random", "--n", "9", "--m", "14", "--pairs", "3", "--count", "8", "--seed", "6", "--out", corpus});

    Run bench = run({"bench", corpus, "--algos", "brute,bb,twdp,vc", "--workers", "2"});
    CHECK(bench.code == cli::kOk);
    std::istringstream lines(bench.out);
    std::string header, line;
    std::getline(lines, header);
    CHECK(header == "file,n,m,kind,terminals,vc,tw,brute_size,brute_ms,bb_size,bb_ms,twdp_size,twdp_ms,vc_size,vc_ms,status");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.substr(line.size() - 6) == ",agree");
    }
    CHECK(rows == 20);

    fs::create_directories(tmp.dir() + "/empty");
    Run empty = run({"bench", tmp.dir() + "/empty"});
    CHECK(empty.code == cli::kOk);
    CHECK(empty.out == "file,n,m,kind,terminals,vc,tw,brute_size,brute_ms,bb_size,bb_ms,twdp_size,twdp_ms,vc_size,vc_ms,"
                       "grid_size,grid_ms,status\n");

    Run grids = run({"random", "--grid", "6x6", "--pairs", "3", "--count", "3", "--seed", "2", "--out", tmp.dir() + "/grids"});
    CHECK(grids.code == cli::kOk);
    Run gb = run({"bench", tmp.dir() + "/grids", "--algos", "grid,bb"});
    CHECK(gb.code == cli::kOk);
}

TEST_CASE("bench fails on a corrupt corpus file") {
    TempDir tmp;
    tmp.file("a.txt", "g 3\ne 0 1\ne 1 2\nS 0 2\n");
    tmp.file("b.txt", "g 3\ne 0 9\n");
    Run r = run({"bench", tmp.dir(), "--algos", "bb"});
    CHECK(r.code == cli::kFailure);
    CHECK(r.out.find("b.txt,parse-error") != std::string::npos);
}

TEST_CASE("workers do not change solve output") {
    TempDir tmp;
    auto inst = tmp.file("w.txt", "grid 8 8\nP (0,0) (7,7)\nP (0,7) (7,0)\nP (3,0) (3,7)\n");
    auto a = run({"solve", inst, "--workers", "1"}).report();
    auto b = run({"solve", inst, "--workers", "3"}).report();
    CHECK(a["size"] == b["size"]);
    CHECK(a["digest"] == b["digest"]);
}

TEST_CASE("installed binary exit codes") {
    TempDir tmp;
    auto ok = tmp.file("ok.txt", "g 3\ne 0 1\ne 1 2\nS 0 2\n");
    auto bad = tmp.file("bad.txt", "g 3\ne 0 5\n");
    auto status = [](const std::string& cmd) {
        int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    const std::string bin = DPRES_CLI_PATH;
    CHECK(status(bin + " solve " + ok) == 0);
    CHECK(status(bin + " solve " + bad) == 2);
    CHECK(status(bin + " solve --algo grid " + ok) == 3);
    CHECK(status(bin + " --help") == 0);
    CHECK(status(bin + " frobnicate") == 1);
}

} // TEST_SUITE
