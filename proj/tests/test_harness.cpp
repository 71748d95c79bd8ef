#include "arratia/config.hpp"
#include "arratia/harness.hpp"
#include "arratia/report.hpp"
#include "arratia/rng.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace arratia;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string csv_of(const std::vector<CsvRow>& rows)
{
    std::ostringstream ss;
    write_csv(ss, rows);
    return ss.str();
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args)
{
    const fs::path dir = fs::temp_directory_path() / "arratia_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string(ARRATIA_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, slurp(out), slurp(err)};
}

} // namespace

TEST_CASE("config text format")
{
    const auto c = RunConfig::parse("# comment\n  method = mc  \n\ndrift=tanh:k=0.5,lam=1 # trailing\nt=1\n");
    CHECK(c.get("method") == "mc");
    CHECK(c.get("drift") == "tanh:k=0.5,lam=1");
    CHECK(c.get_real("t", 0) == 1.0);
    CHECK(c.get_real("x", 2.5) == 2.5);
    CHECK_THROWS_AS(RunConfig::parse("novalue\n"), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::parse("=3\n"), std::invalid_argument);
    CHECK_THROWS_AS(c.get_real("method", 0), std::invalid_argument);
    CHECK_THROWS_AS(c.get("missing"), std::invalid_argument);
    CHECK(RunConfig::parse("a=yes").get_bool("a", false));
    CHECK_THROWS(RunConfig::parse("a=maybe").get_bool("a", false));
}

TEST_CASE("config round trip and digest")
{
    rng::Stream s(1, 0, 0);
    const char* keys[] = {"method", "drift", "t", "x", "seed", "paths", "dt", "h", "U", "runs"};
    for (int k = 0; k < 100; ++k) {
        RunConfig c;
        for (const char* key : keys)
            if (s.uniform() < 0.6)
                c.set(key, -5.0 + 10.0 * s.uniform());
        const RunConfig back = RunConfig::parse(c.serialize());
        CHECK(back == c);
        CHECK(back.digest() == c.digest());
        RunConfig threaded = c;
        threaded.set("threads", "16");
        threaded.set("out", "somewhere.csv");
        CHECK(threaded.digest() == c.digest());
        RunConfig other = c;
        other.set("seed", "12345");
        if (!(c.has("seed") && c.get("seed") == "12345"))
            CHECK(other.digest() != c.digest());
    }
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("overrides and seed fallback")
{
    RunConfig file = RunConfig::parse("t=1\nx=0\nseed=5\n");
    file.merge(RunConfig::parse("x=2\n"));
    CHECK(file.get("x") == "2");
    CHECK(file.get("t") == "1");

    RunConfig none;
    setenv("ARRATIA_SEED", "77", 1);
    CHECK(harness::resolve_seed(none) == 77);
    CHECK(none.get("seed") == "77");
    RunConfig explicit_seed = RunConfig::parse("seed=3");
    CHECK(harness::resolve_seed(explicit_seed) == 3);
    unsetenv("ARRATIA_SEED");
    RunConfig fallback;
    CHECK(harness::resolve_seed(fallback) == harness::kDefaultSeed);
}

TEST_CASE("CSV schema")
{
    CHECK(csv_header() == "method,drift,t,x,estimate,stat_error,det_bound,flag,seed,config_digest,runtime_ms");
    CsvRow r;
    r.method = "mc";
    r.drift = "tanh:k=0.5,lam=1";
    r.t = 1;
    r.x = 0.25;
    r.estimate.value = 0.5;
    r.estimate.seed = 9;
    r.estimate.config_digest = "00ff";
    CHECK(csv_line(r) == "mc,\"tanh:k=0.5,lam=1\",1,0.25,0.5,0,0,ok,9,00ff,NA");
    r.runtime_ms = 12.5;
    r.estimate.seed.reset();
    CHECK(csv_line(r) == "mc,\"tanh:k=0.5,lam=1\",1,0.25,0.5,0,0,ok,NA,00ff,12.5");
    CHECK(parse_method("pde") == Method::pde);
    CHECK(to_string(Method::flow) == "flow");
    CHECK_THROWS_AS(parse_method("magic"), std::invalid_argument);
}

TEST_CASE("run_density")
{
    const auto oracle = harness::run_density(RunConfig::parse("method=oracle\ndrift=zero\nt=1"));
    REQUIRE(oracle.rows.size() == 1);
    CHECK(oracle.estimate.value == doctest::Approx(0.5641896).epsilon(1e-7));
    CHECK(oracle.estimate.stat_error == 0.0);
    CHECK(csv_line(oracle.rows[0]).rfind("oracle,zero,1,0,0.564189583547756", 0) == 0);

    try {
        harness::run_density(RunConfig::parse("method=series\ndrift=linear:c=1"));
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()) == "unbounded drift unsupported by series");
    }
    CHECK_THROWS(harness::run_density(RunConfig::parse("method=oracle\ndrift=tanh:k=1,lam=1")));
    CHECK_THROWS(harness::run_density(RunConfig::parse("method=nope")));

    const auto cfg = RunConfig::parse("method=mc\ndrift=tanh:k=0.5,lam=1\nt=1\nx=0.2\npaths=5000\nseed=4");
    const auto a = harness::run_density(cfg), b = harness::run_density(cfg);
    CHECK(csv_of(a.rows) == csv_of(b.rows));
    CHECK(a.rows[0].estimate.seed.value() == 4);

    const auto fl = harness::run_density(
        RunConfig::parse("method=flow\ndrift=zero\nt=1\nx=0\nU=8\nruns=20\nbins=4\nwidth=4"));
    CHECK(fl.rows.size() == 4);
    CHECK(fl.rows[0].x == doctest::Approx(-1.5));
}

TEST_CASE("method comparison")
{
    const auto rep = harness::compare_methods(
        RunConfig::parse("drift=const:k=2\nt=1\nx=0\nmethods=series,mc\npaths=50000\nsamples=20000"));
    CHECK(rep.estimates.size() == 2);
    CHECK(rep.pairs.size() == 1);
    CHECK(rep.pass());
    CHECK(rep.rows.size() == 2);
}

TEST_CASE("convergence experiment")
{
    const auto zero = harness::experiment_converge(
        RunConfig::parse("drift=zero\nmode=Linf\nmethod=mc\nns=1,8,16\npaths=5000\nt=1"));
    for (const auto& r : zero.rows)
        CHECK(r.error == 0.0);
    CHECK(zero.pass());
    const auto l1 = harness::experiment_converge(
        RunConfig::parse("drift=zero\nmode=L1\nmethod=pde\nns=1,8\nh=0.08\nt=0.5"));
    CHECK(l1.pass());
    CHECK_THROWS_AS(harness::experiment_converge(RunConfig::parse("drift=tanh:k=1,lam=1\nmode=L1\nmethod=mc")),
                    std::invalid_argument);
    CHECK_THROWS_AS(harness::experiment_converge(RunConfig::parse("drift=zero\nmethod=flow")),
                    std::invalid_argument);

    const auto step = harness::experiment_converge(
        RunConfig::parse("drift=step:h=0.5,lo=-1,hi=1\nmode=L1\nmethod=pde\nns=1,2,4\nh=0.08\nt=0.5"));
    CHECK(step.rows[0].distance > step.rows[1].distance);
    CHECK(step.rows[1].distance > step.rows[2].distance);
    CHECK(step.csv().size() == 4);
}

TEST_CASE("plot data")
{
    const fs::path dir = fs::temp_directory_path() / "arratia_plot_test";
    fs::create_directories(dir);
    const auto conv = harness::experiment_converge(
        RunConfig::parse("drift=tanh:k=0.5,lam=1\nmode=Linf\nmethod=pde\nns=1,2,4\nh=0.1\nt=0.5"));
    harness::emit_plot_data(conv, (dir / "conv").string());
    CHECK(fs::exists(dir / "conv.dat"));
    CHECK(slurp(dir / "conv.svg").find("<polyline") != std::string::npos);

    const auto cmp =
        harness::compare_methods(RunConfig::parse("drift=zero\nmethods=oracle,series\nt=1\nsamples=1000"));
    harness::emit_plot_data(cmp, (dir / "cmp").string());
    CHECK(slurp(dir / "cmp.svg").find("<rect x=") != std::string::npos);

    harness::ConvergenceReport empty;
    try {
        harness::emit_plot_data(empty, (dir / "empty").string());
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()) == "nothing to plot");
    }
    fs::remove_all(dir);
}

TEST_CASE("command line exit codes")
{
    const auto ok = run_cli("density --method oracle --drift zero --t 1");
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind(csv_header() + "\n", 0) == 0);
    CHECK(ok.out.find("oracle,zero,1,0,0.564189583547756") != std::string::npos);

    const auto bad = run_cli("density --method series --drift linear:c=1 --t 1");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("unbounded drift unsupported by series") != std::string::npos);

    CHECK(run_cli("density --method telepathy").code == 1);
    CHECK(run_cli("density --method oracle --drift nonsense").code == 1);
    CHECK(run_cli("density --method oracle --t notanumber").code == 1);
    CHECK(run_cli("density --method series --drift tanh:k=0.5,lam=1 --tol 1e-9 --samples 2000").code == 2);
    CHECK(run_cli("validate kernels").code == 0);
}

TEST_CASE("command line config files and reproducibility")
{
    const fs::path dir = fs::temp_directory_path() / "arratia_cli_cfg";
    fs::create_directories(dir);
    const fs::path cfg = dir / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "# exit-time estimate\nmethod=mc\ndrift=tanh:k=0.5,lam=1\nt=1\nx=0\npaths=4000\nseed=11\n";
    }
    const auto a = run_cli("density --config " + cfg.string() + " --threads 1");
    const auto b = run_cli("density --config " + cfg.string() + " --threads 4");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto c = run_cli("density --config " + cfg.string() + " --seed 12");
    CHECK(c.out != a.out);
    const auto d = run_cli("density --config " + cfg.string() + " --out " + (dir / "o.csv").string());
    CHECK(slurp(dir / "o.csv") == a.out);
    fs::remove_all(dir);
}
