#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "pricing/json_io.hpp"

using namespace pricing;
namespace js = pricing::jsonio;
using js::Json;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("pricer_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CmdResult run_pricer(const std::string& args) {
    static int counter = 0;
    ++counter;
    const fs::path out = work_dir() / ("stdout_" + std::to_string(counter));
    const fs::path err = work_dir() / ("stderr_" + std::to_string(counter));
    const std::string cmd = std::string("\"") + PRICER_BINARY_PATH + "\" " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

const std::string kSingleBuyerMarket =
    R"({"goods": 1, "supply": [1], "buyers": [{"class": "additive", "values": [10]}]})";

const std::string kUnitDemandMarket = R"({
  "goods": 2, "supply": [1, 1],
  "buyers": [
    {"class": "unit_demand", "values": [10, 0]},
    {"class": "unit_demand", "values": [0, 6]},
    {"class": "unit_demand", "values": [4, 4]}
  ]})";

const std::string kQuantityMarket = R"({
  "goods": 2, "supply": [1, 1],
  "buyers": [
    {"class": "multi_unit", "table": [0, 5, 5]},
    {"class": "multi_unit", "table": [0, 5, 5]},
    {"class": "multi_unit", "table": [0, 5, 5]}
  ]})";

} // namespace

TEST_CASE("cli prices the lone-buyer market at value minus the tail offset") {
    const fs::path inst = write_file("lone.json", kSingleBuyerMarket);
    const fs::path out = work_dir() / "lone_out.json";
    const auto r = run_pricer("solve-xos --instance " + inst.string() + " --out " +
                              out.string());
    REQUIRE(r.exit_code == 0);

    const Json doc = js::parse(slurp(out));
    REQUIRE(doc.at("kind") == "xos-core");
    REQUIRE(doc.at("all_pass") == true);
    const Rational revenue = js::rational_from_json(doc.at("revenue"));
    REQUIRE(revenue == Rational(10) - Rational(10) * pow2(-20));
    REQUIRE(js::rational_from_json(doc.at("welfare_bound")) == Rational(10));
}

TEST_CASE("cli verify accepts clean documents and names corrupted claims") {
    const fs::path inst = write_file("v_inst.json", kSingleBuyerMarket);
    const fs::path out = work_dir() / "v_out.json";
    REQUIRE(run_pricer("solve-xos --instance " + inst.string() + " --out " + out.string())
                .exit_code == 0);

    const auto clean = run_pricer("verify --instance " + out.string());
    REQUIRE(clean.exit_code == 0);
    REQUIRE(js::parse(clean.out).at("all_pass") == true);

    Json doc = js::parse(slurp(out));
    doc["trace"]["rounds"][0]["prices"] = Json::array({0});
    const fs::path bad = write_file("v_bad.json", js::serialize(doc));
    const auto broken = run_pricer("verify --instance " + bad.string());
    REQUIRE(broken.exit_code == 1);
    REQUIRE(js::parse(broken.out).at("all_pass") == false);
    REQUIRE(broken.err.find("tail-round") != std::string::npos);
}

TEST_CASE("cli exit codes separate input, check, and cap failures") {
    const fs::path broken = write_file("broken.json", "{ this is not json");
    REQUIRE(run_pricer("solve-xos --instance " + broken.string()).exit_code == 2);

    REQUIRE(run_pricer("solve-xos --instance /nonexistent/nope.json").exit_code == 2);
    REQUIRE(run_pricer("solve-xos").exit_code == 2); // missing required flag
    REQUIRE(run_pricer("").exit_code == 2);          // missing subcommand

    const fs::path inst = write_file("codes_inst.json", kSingleBuyerMarket);
    REQUIRE(run_pricer("solve-xos --instance " + inst.string() + " --max-goods 0")
                .exit_code == 3);
    REQUIRE(run_pricer("solve-xos --instance " + inst.string() + " --max-buyers 0")
                .exit_code == 3);

    const fs::path sm = write_file(
        "codes_sm.json",
        R"({"goods": 2, "supply": [1,1],
            "buyers": [{"class": "single_minded", "bundle": [0,1], "value": 7}]})");
    const auto unsupported = run_pricer("solve-xos --instance " + sm.string());
    REQUIRE(unsupported.exit_code == 2);

    const fs::path zero = write_file(
        "codes_zero.json",
        R"({"goods": 1, "supply": [1], "buyers": [{"class": "additive", "values": [0]}]})");
    REQUIRE(run_pricer("solve-xos --instance " + zero.string()).exit_code == 2);

    // Valid JSON with wrong field types must be rejected cleanly, not crash.
    const fs::path shape = write_file(
        "codes_shape.json",
        R"({"goods": [0,1], "supply": [1,1],
            "buyers": [{"class": "additive", "values": [3,4]}]})");
    const auto wrong_shape = run_pricer("solve-xos --instance " + shape.string());
    REQUIRE(wrong_shape.exit_code == 2);
    REQUIRE(wrong_shape.err.find("malformed document") != std::string::npos);

    const fs::path missing = write_file(
        "codes_missing.json", R"({"goods": 1, "supply": [1]})");
    REQUIRE(run_pricer("solve-xos --instance " + missing.string()).exit_code == 2);

    REQUIRE(run_pricer("--help").exit_code == 0);
}

TEST_CASE("cli gen is reproducible and honors a seed override") {
    const fs::path spec = write_file("gen_spec.json", R"({
        "class": "xos", "goods": 3, "buyers": 2,
        "supply": [1, 2], "values": [0, 8], "clauses": [1, 2], "seed": 42})");
    const fs::path a = work_dir() / "gen_a.json";
    const fs::path b = work_dir() / "gen_b.json";
    const fs::path c = work_dir() / "gen_c.json";

    REQUIRE(run_pricer("gen --instance " + spec.string() + " --out " + a.string())
                .exit_code == 0);
    REQUIRE(run_pricer("gen --instance " + spec.string() + " --out " + b.string())
                .exit_code == 0);
    REQUIRE(slurp(a) == slurp(b));

    REQUIRE(run_pricer("gen --instance " + spec.string() + " --seed 43 --out " +
                       c.string())
                .exit_code == 0);
    REQUIRE(slurp(a) != slurp(c));

    const Instance inst = js::instance_from_json(js::parse(slurp(a)));
    REQUIRE(inst.m == 3);
    REQUIRE(inst.buyer_count() == 2);
}

TEST_CASE("cli simulate replays orders per arrival mode") {
    const fs::path inst = write_file("sim_inst.json", kUnitDemandMarket);
    const fs::path solved = work_dir() / "sim_solved.json";
    REQUIRE(run_pricer("solve-xos --instance " + inst.string() + " --out " +
                       solved.string())
                .exit_code == 0);

    SECTION("adversarial mode enumerates every order") {
        const auto r = run_pricer("simulate --instance " + solved.string() +
                                  " --arrival adversarial");
        REQUIRE(r.exit_code == 0);
        const Json doc = js::parse(r.out);
        REQUIRE(doc.at("runs").size() == 6); // 3! orders
        const Rational worst = js::rational_from_json(doc.at("worst").at("revenue"));
        for (const auto& run : doc.at("runs"))
            REQUIRE(js::rational_from_json(run.at("revenue")) >= worst);
    }
    SECTION("fixed mode runs one order") {
        const fs::path orders = write_file("sim_orders.json", "[[2, 1, 0]]");
        const auto r = run_pricer("simulate --instance " + solved.string() +
                                  " --arrival fixed --orders-file " + orders.string());
        REQUIRE(r.exit_code == 0);
        const Json doc = js::parse(r.out);
        REQUIRE(doc.at("runs").size() == 1);
        REQUIRE(doc.at("runs")[0].at("order") == Json::array({2, 1, 0}));
    }
    SECTION("random mode is seed-reproducible") {
        const std::string args = "simulate --instance " + solved.string() +
                                 " --arrival random --samples 4 --seed 11";
        const auto r1 = run_pricer(args);
        const auto r2 = run_pricer(args);
        REQUIRE(r1.exit_code == 0);
        REQUIRE(r1.out == r2.out);
        const Json doc = js::parse(r1.out);
        REQUIRE(doc.at("runs").size() == 4);
        REQUIRE(doc.contains("mean_revenue"));
    }
}

TEST_CASE("cli multi-unit and reduction pipelines round trip through verify") {
    SECTION("single-price solver") {
        const fs::path inst = write_file("pipe_mu.json", kQuantityMarket);
        const fs::path out = work_dir() / "pipe_mu_out.json";
        const auto r =
            run_pricer("solve-multiunit --instance " + inst.string() + " --out " +
                       out.string());
        REQUIRE(r.exit_code == 0);
        const Json doc = js::parse(slurp(out));
        REQUIRE(doc.at("kind") == "multi-unit");
        REQUIRE(doc.at("solution").at("case") == "threshold");
        REQUIRE(js::rational_from_json(doc.at("solution").at("price")) == Rational(5));
        REQUIRE(run_pricer("verify --instance " + out.string()).exit_code == 0);
    }
    SECTION("reduction with both welfare subroutines") {
        const fs::path inst = write_file("pipe_ud.json", kUnitDemandMarket);
        const fs::path out = work_dir() / "pipe_ud_out.json";
        for (const std::string bb : {"unit_demand_walrasian", "brute_walrasian"}) {
            const auto r = run_pricer("price-double --instance " + inst.string() +
                                      " --black-box " + bb + " --out " + out.string());
            REQUIRE(r.exit_code == 0);
            const Json doc = js::parse(slurp(out));
            REQUIRE(doc.at("kind") == "price-doubling");
            REQUIRE(doc.at("black_box") == bb);
            REQUIRE(doc.at("all_pass") == true);
            REQUIRE(run_pricer("verify --instance " + out.string()).exit_code == 0);
        }
    }
}

TEST_CASE("cli bench emits a deterministic ratio CSV") {
    const fs::path batch = write_file("bench_batch.json", R"({
        "spec": {"class": "unit_demand", "goods": 3, "buyers": 3,
                 "supply": [1, 2], "values": [0, 50], "seed": 7},
        "count": 4})");
    const fs::path a = work_dir() / "bench_a.csv";
    const fs::path b = work_dir() / "bench_b.csv";
    REQUIRE(run_pricer("bench --instance " + batch.string() + " --out " + a.string())
                .exit_code == 0);
    REQUIRE(run_pricer("bench --instance " + batch.string() + " --out " + b.string())
                .exit_code == 0);

    const std::string csv = slurp(a);
    REQUIRE(csv == slurp(b));
    REQUIRE(csv.rfind("instance,welfare_bound,revenue,welfare,ratio,tag\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 5); // header + 4 rows

    const fs::path list = write_file("bench_list.json",
                                     "[" + kQuantityMarket + "," + kQuantityMarket + "]");
    const auto r = run_pricer("bench --instance " + list.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("threshold") != std::string::npos);
}
