// End-to-end checks of the command-line tool: exit-code contract, header
// stamping, determinism, config-file plumbing, and failure injection.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include <fdspec/asymptotics.hpp>
#include <fdspec/model.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = FDSPEC_CLI_PATH;

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "fdspec_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream is(csv);
    std::string line;
    bool past_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!past_header) {
            past_header = true; // column header row
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(tok);
    return out;
}

} // namespace

TEST_CASE("spectrum: certified run, header stamp, determinism") {
    fs::path f1 = work_dir() / "spec1.csv";
    fs::path f2 = work_dir() / "spec2.csv";
    std::string flags = "spectrum --family zeta --b 1 --zeta 1 --want 3 --tol 1e-6 --out ";
    CHECK(run(flags + f1.string()) == 0);
    CHECK(run(flags + f2.string()) == 0);

    std::string csv = slurp(f1);
    CHECK(csv == slurp(f2)); // byte-identical reruns
    CHECK(csv.rfind("# tool: fdspec ", 0) == 0);
    CHECK(csv.find("# params: command=spectrum;family=zeta") != std::string::npos);
    CHECK(csv.find("# config-hash: ") != std::string::npos);
    CHECK(csv.find("index,eigenvalue,certificate\r\n") != std::string::npos);

    auto rows = data_rows(csv);
    REQUIRE(rows.size() == 3); // exactly --want rows
    auto cols = split(rows[0], ',');
    REQUIRE(cols.size() == 3);
    CHECK(cols[0] == "1");
    CHECK(std::stod(cols[1]) == doctest::Approx(17.8466431).epsilon(1e-5));
    CHECK(std::stod(cols[2]) <= 1e-6 * std::stod(cols[1]));
}

TEST_CASE("spectrum: JSON output carries metadata and the params block") {
    fs::path f = work_dir() / "spec.json";
    CHECK(run("spectrum --family zeta --want 2 --tol 1e-5 --format json --out " +
              f.string()) == 0);
    auto j = nlohmann::json::parse(slurp(f));
    CHECK(j["meta"]["tool"].get<std::string>().rfind("fdspec ", 0) == 0);
    CHECK(j["meta"].contains("config_hash"));
    CHECK(j["spectrum"]["params"]["family"] == "zeta");
    CHECK(j["spectrum"]["eigenvalues"].size() == 2);
}

TEST_CASE("exit-code contract: config errors") {
    CHECK(run("spectrum --no-such-flag") == 2);
    CHECK(run("spectrum --family bogus") == 2);
    CHECK(run("nosuchcommand") == 2);
    CHECK(run("") == 2); // subcommand required
    CHECK(run("volume --symbol bogus --family zeta") == 2);
    CHECK(run("bs --nodes 4") == 2);
    CHECK(run("sandwich --lambda-grid :") == 2);
    CHECK(run("heat --t-grid 0 --family zeta") == 2);
    CHECK(run("weyl --family zeta --lambda-grid 1:2:5") == 2); // window below e
    CHECK(run("spectrum --format xml") == 2);
}

TEST_CASE("zeta = 0 short-circuits with a warning and exit 3") {
    fs::path f = work_dir() / "ac.csv";
    CHECK(run("spectrum --family zeta --zeta 0 --out " + f.string()) == 3);
    std::string csv = slurp(f);
    CHECK(csv.find("no discrete spectrum") != std::string::npos);
    CHECK(data_rows(csv).empty());
}

TEST_CASE("volume matches the library phase integral") {
    fs::path f = work_dir() / "vol.csv";
    CHECK(run("volume --family zeta --b 1 --zeta 1 --symbol classical "
              "--lambda-grid 50 --out " + f.string()) == 0);
    auto rows = data_rows(slurp(f));
    REQUIRE(rows.size() == 1);
    auto cols = split(rows[0], ',');
    REQUIRE(cols.size() == 3);
    auto params = fdspec::ModelParams::zeta_family(1.0, 1.0);
    auto frame = fdspec::coherent_constants(params);
    auto rep = fdspec::phase_integral(params, frame,
                                      fdspec::SymbolVariant::ClassicalSymbol, 50.0);
    CHECK(std::stod(cols[0]) == 50.0);
    CHECK(std::stod(cols[1]) == doctest::Approx(rep.value).epsilon(1e-12));
}

TEST_CASE("sandwich rejects an injected corrupt spectrum with exit 5") {
    fs::path bad = work_dir() / "bad_spectrum.csv";
    {
        std::ofstream out(bad, std::ios::binary);
        out << "index,eigenvalue,certificate\r\n"
            << "1,2.1,0\r\n2,2.2,0\r\n3,2.3,0\r\n4,1000,0\r\n";
    }
    CHECK(run("sandwich --family zeta --b 1 --zeta 1 --lambda-grid 10 "
              "--spectrum-file " + bad.string()) == 5);
    // Unreadable file is a config error, not a verification failure.
    CHECK(run("sandwich --family zeta --spectrum-file /nonexistent.csv") == 2);
}

TEST_CASE("sandwich passes on a genuine certified spectrum file") {
    fs::path spec = work_dir() / "good_spectrum.csv";
    CHECK(run("spectrum --family zeta --b 1 --zeta 1 --want 8 --tol 1e-8 --out " +
              spec.string()) == 0);
    fs::path out = work_dir() / "sandwich.csv";
    CHECK(run("sandwich --family zeta --b 1 --zeta 1 --lambda-grid 10:30:2 "
              "--spectrum-file " + spec.string() + " --out " + out.string()) == 0);
    for (const auto& row : data_rows(slurp(out))) {
        auto cols = split(row, ',');
        REQUIRE(cols.size() == 6);
        CHECK(cols[5] == "pass");
    }
}

TEST_CASE("weyl: synthetic-exact riesz samples fit to machine accuracy") {
    // Exact three-term law with A equal to the predicted coefficient.
    double A = 1.0 / (fdspec::kPi * fdspec::kPi), B = 0.7, C = -1.2;
    fs::path riesz = work_dir() / "riesz.csv";
    {
        std::ofstream out(riesz, std::ios::binary);
        out.precision(17);
        out << "lambda,riesz\r\n";
        for (int i = 0; i < 40; ++i) {
            double lam = 50.0 * std::pow(30.0, i / 39.0);
            double L = std::log(lam);
            out << lam << "," << (A * lam * L * L + B * lam * L + C * lam) << "\r\n";
        }
    }
    fs::path out = work_dir() / "weyl.csv";
    CHECK(run("weyl --family zeta --b 1 --riesz-file " + riesz.string() +
              " --out " + out.string()) == 0);
    auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 1);
    auto cols = split(rows[0], ',');
    REQUIRE(cols.size() == 8);
    CHECK(std::stod(cols[4]) < 1e-10); // relative deviation from predicted A
}

TEST_CASE("heat flags tail-dominated rows with exit 3") {
    fs::path spec = work_dir() / "short_spectrum.csv";
    {
        // Last row uncertified: the tail envelope kicks in and dominates at
        // small t.
        std::ofstream out(spec, std::ios::binary);
        out << "index,eigenvalue,certificate\r\n"
            << "1,17.85,1e-8\r\n2,70.43,1e-8\r\n3,197.99\r\n";
    }
    fs::path out = work_dir() / "heat.csv";
    CHECK(run("heat --family zeta --b 1 --zeta 1 --t-grid 0.5:0.01:4 "
              "--spectrum-file " + spec.string() + " --out " + out.string()) == 3);
    bool flagged = false;
    for (const auto& row : data_rows(slurp(out)))
        if (row.find("tail-dominated") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("bs campaign passes and reports zero counts below the band bottom") {
    fs::path out = work_dir() / "bs.csv";
    CHECK(run("bs --family zeta --b 1 --zeta 1 --want 4 --tol 1e-6 "
              "--lambda-grid 5:20:3 --out " + out.string()) == 0);
    auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        auto cols = split(row, ',');
        REQUIRE(cols.size() == 4);
        CHECK(cols[3] == "pass");
        CHECK(std::stoi(cols[1]) <= std::stoi(cols[2]));
    }
    // lambda = 5 < lambda_1: the spectral count is zero.
    CHECK(split(rows[0], ',')[1] == "0");
}

TEST_CASE("coherent-check: seed changes draws but not verdicts") {
    fs::path f1 = work_dir() / "cc1.csv";
    fs::path f2 = work_dir() / "cc2.csv";
    std::string base = "coherent-check --family zeta --b 1 --zeta 1 --trials 2 ";
    CHECK(run(base + "--seed 1 --out " + f1.string()) == 0);
    CHECK(run(base + "--seed 2 --out " + f2.string()) == 0);
    std::string c1 = slurp(f1), c2 = slurp(f2);
    CHECK(c1 != c2);
    for (const std::string& c : {c1, c2})
        for (const auto& row : data_rows(c))
            CHECK(row.substr(row.size() - 4) == "pass");
}

TEST_CASE("JSON config file with command-line override") {
    fs::path cfg = work_dir() / "cfg.json";
    {
        std::ofstream out(cfg);
        out << R"({"family":"zeta","b":1.0,"want":2,"tol":1e-5})";
    }
    fs::path f1 = work_dir() / "cfg_run1.csv";
    CHECK(run("spectrum --config " + cfg.string() + " --out " + f1.string()) == 0);
    CHECK(data_rows(slurp(f1)).size() == 2); // want from the config file

    fs::path f2 = work_dir() / "cfg_run2.csv";
    CHECK(run("spectrum --config " + cfg.string() + " --want 3 --out " + f2.string()) == 0);
    CHECK(data_rows(slurp(f2)).size() == 3); // flag overrides the file

    fs::path badcfg = work_dir() / "bad.json";
    {
        std::ofstream out(badcfg);
        out << R"({"no_such_field":1})";
    }
    CHECK(run("spectrum --config " + badcfg.string()) == 2);
    {
        std::ofstream out(badcfg);
        out << "{not json";
    }
    CHECK(run("spectrum --config " + badcfg.string()) == 2);
    CHECK(run("spectrum --config /nonexistent.json") == 2);
}
