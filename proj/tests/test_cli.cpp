#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "json.hpp"
#include "subweibull/cli/config.hpp"
#include "subweibull/cli/csv.hpp"
#include "subweibull/cli/experiments.hpp"
#include "subweibull/cli/manifest.hpp"
#include "subweibull/cli/svg.hpp"
#include "subweibull/errors.hpp"

namespace fs = std::filesystem;
using namespace subweibull;
using namespace subweibull::cli;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("subweibull_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(SUBWEIBULL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kTail = "experiment=tailcheck\nseed=7\nalpha=0.5,1,2\nn=100,1000\nreps=2000\n";

}  // namespace

TEST_CASE("parse_config") {
    const auto c = parse_config(kTail);
    CHECK(c.experiment == "tailcheck");
    CHECK(c.seed == 7);
    CHECK(c.list("alpha", {}) == std::vector<double>{0.5, 1, 2});
    CHECK(c.list("n", {}) == std::vector<double>{100, 1000});
    CHECK(c.integer("reps", 0) == 2000);
    CHECK(c.list("t", {9}) == std::vector<double>{9});

    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("experiment=nosuch").find("experiment") != std::string::npos);
    CHECK(message("experiment=nosuch").find("line 1") != std::string::npos);
    CHECK(message("").find("experiment missing") != std::string::npos);
    CHECK(message("# only a comment\n").find("experiment missing") != std::string::npos);
    CHECK(message("experiment=norms\nfoo=1").find("line 2: unknown key 'foo'") != std::string::npos);
    CHECK(message("experiment=norms\nn=12x").find("line 2") != std::string::npos);
    CHECK(message("experiment=norms\nn=0").find("line 2") != std::string::npos);
    CHECK(message("experiment=norms\nn=10\nn=20").find("line 3") != std::string::npos);
    CHECK(message("experiment=norms\nc_alpha_cov=-1").find("line 2") != std::string::npos);
    const auto k = parse_config("experiment=norms # trailing\n\nc_alpha_cov=2.5\n");
    CHECK(k.constants.c_alpha_cov == 2.5);
    CHECK(registered_experiments().size() == 8);
}

TEST_CASE("csv round trip") {
    CsvTable t{"demo/1", {"a", "b", "c"}, {}};
    t.add_row({Cell(0.1), Cell(3LL), Cell(std::string("x,y"))});
    CHECK_THROWS(t.add_row({Cell(1.0)}));
    const std::string text = to_csv(t);
    CHECK(text.rfind("# schema: demo/1\na,b,c\n0.10000000000000001,3,\"x,y\"\n", 0) == 0);
    const auto back = parse_csv(text);
    CHECK(back.schema == "demo/1");
    CHECK(back.columns == t.columns);
    CHECK(back.numeric_column("a")[0] == 0.1);
    CHECK(std::get<std::string>(back.rows[0][2]) == "x,y");
}

TEST_CASE("tailcheck run writes the expected tables deterministically") {
    const auto cfg = parse_config(kTail);
    const auto d1 = scratch("tail1"), d2 = scratch("tail2");
    const auto m = run(cfg, {d1.string(), 1, std::nullopt});
    run(cfg, {d2.string(), 1, std::nullopt});
    const auto results = parse_csv(slurp(d1 / "results.csv"));
    CHECK(results.rows.size() == 3 * 2 * 3);
    for (const char* col : {"threshold", "bound", "frequency", "mc_se", "constants"}) CHECK_NOTHROW(results.column_index(col));
    CHECK(results.columns.back() == "constants");
    CHECK(std::get<std::string>(results.rows[0].back()) == BoundConstants{}.to_string());
    CHECK(slurp(d1 / "results.csv") == slurp(d2 / "results.csv"));
    CHECK(slurp(d1 / "plot_alpha.svg") == slurp(d2 / "plot_alpha.svg"));

    // manifest digests match the files on disk
    const auto j = nlohmann::json::parse(slurp(d1 / "manifest.json"));
    CHECK(j["experiment"] == "tailcheck");
    CHECK(j["seed"] == 7);
    REQUIRE(m.files.size() == j["files"].size());
    for (const auto& f : j["files"]) {
        const fs::path p = d1 / f["path"].get<std::string>();
        CHECK(sha256_file(p.string()) == f["sha256"].get<std::string>());
        CHECK(fs::file_size(p) == f["bytes"].get<std::uintmax_t>());
    }
    CHECK(j["constants"]["c_alpha_cov"] == 1.0);
}

TEST_CASE("seed override changes the stream") {
    const auto cfg = parse_config("experiment=tailcheck\nseed=7\nalpha=1\nn=100\nt=1\nreps=200\npilot=1000\n");
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    run(cfg, {a.string(), 1, std::nullopt});
    const auto mb = run(cfg, {b.string(), 1, 8});
    CHECK(mb.seed == 8);
    CHECK(slurp(a / "results.csv") != slurp(b / "results.csv"));
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("plots") {
    CsvTable t{"p/1", {"n", "y"}, {}};
    t.add_row({Cell(100.0), Cell(0.5)});
    t.add_row({Cell(400.0), Cell(0.25)});
    const std::string svg = render_plot(t, "n", "y", true);
    std::size_t circles = 0;
    for (std::size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
    CHECK(circles == 2);
    CHECK(svg.find("slope = -0.5000") != std::string::npos);
    CHECK(svg == render_plot(t, "n", "y", true));
    t.add_row({Cell(800.0), Cell(0.0)});
    CHECK_THROWS_AS(plot_series(t, "n", "y", true), std::invalid_argument);
    CHECK_THROWS_AS(emit_plot(t, "n", "y", true, (scratch("plot") / "x.svg").string()), std::invalid_argument);
    CHECK_NOTHROW(render_plot(t, "n", "y", false));
    CHECK(format_slope(-0.123456) == "-0.1235");
}

TEST_CASE("lasso summary slope equals a hand OLS fit and the plot annotation") {
    const auto cfg = parse_config("experiment=lasso\nseed=3\np=40\nk=3\nn=200,400,800\nreps=20\n");
    const auto d = scratch("lasso");
    run(cfg, {d.string(), 1, std::nullopt});
    const auto s = parse_csv(slurp(d / "summary.csv"));
    const auto n = s.numeric_column("n"), med = s.numeric_column("median_l2_error");
    const auto slope = s.numeric_column("median_l2_error_slope"), se = s.numeric_column("median_l2_error_slope_se");
    REQUIRE(n.size() == 3);
    double mx = 0, my = 0;
    for (int i = 0; i < 3; ++i) mx += std::log(n[i]) / 3, my += std::log(med[i]) / 3;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
        sxx += (std::log(n[i]) - mx) * (std::log(n[i]) - mx);
        sxy += (std::log(n[i]) - mx) * (std::log(med[i]) - my);
    }
    const double b = sxy / sxx;
    double rss = 0;
    for (int i = 0; i < 3; ++i) {
        const double e = std::log(med[i]) - my - b * (std::log(n[i]) - mx);
        rss += e * e;
    }
    CHECK(slope[0] == doctest::Approx(b).epsilon(1e-12));
    CHECK(se[0] == doctest::Approx(std::sqrt(rss / 1.0 / sxx)).epsilon(1e-9));
    const std::string svg = slurp(d / "plot_n.svg");
    CHECK(svg.find("slope = " + format_slope(slope[0])) != std::string::npos);
}

TEST_CASE("binary exit codes") {
    const auto d = scratch("bin");
    const fs::path good = d / "good.cfg", bad = d / "bad.cfg", broken = d / "broken.cfg", viol = d / "viol.cfg";
    write_text_file(good.string(), "experiment=tailcheck\nalpha=1\nn=100\nt=1\nreps=200\npilot=1000\n");
    write_text_file(bad.string(), "experiment=tailcheck\nbogus=1\n");
    // a tiny Gamma and constant push the threshold far below the empirical tail
    write_text_file(viol.string(),
                    "experiment=tailcheck\nalpha=1\nn=100\nt=4\nreps=200\npilot=1000\nc_alpha_max_avg=1e-9\ntail_gamma=1e-9\n");
    write_text_file(broken.string(), "experiment=norms\nn=1\n");
    CHECK(run_binary("list") == 0);
    CHECK(run_binary("run " + good.string() + " --out " + (d / "o1").string() + " --workers 1") == 0);
    CHECK(fs::exists(d / "o1" / "manifest.json"));
    CHECK(run_binary("run " + bad.string() + " --out " + (d / "o2").string()) == 2);
    CHECK(run_binary("run " + (d / "missing.cfg").string()) == 4);
    CHECK(run_binary("run " + viol.string() + " --out " + (d / "o3").string() + " --workers 1") == 3);
    CHECK_FALSE(fs::exists(d / "o3" / "manifest.json"));
    write_text_file((d / "file").string(), "x");
    CHECK(run_binary("run " + good.string() + " --out " + (d / "file" / "sub").string()) == 4);
}
