#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <algorithm>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(PDLAB_EXE) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        out.append(buf, n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch()
{
    const fs::path d = fs::temp_directory_path() / ("pdlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("domain writes Q and reloads")
{
    const fs::path dir = scratch();
    const fs::path f = dir / "d.json";
    REQUIRE(run("domain --weight 2 --hodge 1,19,1 --out " + f.string()).code == 0);
    const json j = json::parse(slurp(f));
    CHECK(j["weight"] == 2);
    CHECK(j["hodge_numbers"] == json({1, 19, 1}));
    CHECK(j["Q"].size() == 21u * 21u);
    const Run again = run("domain --domain " + f.string());
    CHECK(again.code == 0);
    CHECK(json::parse(again.out) == j);
}

TEST_CASE("invalid input exits 2")
{
    CHECK(run("domain --weight 2 --hodge 1,2").code == 2);
    CHECK(run("domain --weight 2 --hodge 1,x,1").code == 2);
    CHECK(run("verify --weight 1 --hodge 1,1 --suite nope").code == 2);
    CHECK(run("verify --weight 1 --hodge 1,1").code == 2);
    CHECK(run("path --weight 1 --hodge 1,1 --field wavy").code == 2);
    CHECK(run("frobnicate").code == 2);
}

TEST_CASE("paths are reproducible")
{
    const Run a = run("path --weight 2 --hodge 1,3,1 --seed 9 --steps 50");
    const Run b = run("path --weight 2 --hodge 1,3,1 --seed 9 --steps 50");
    const Run c = run("path --weight 2 --hodge 1,3,1 --seed 10 --steps 50");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 52);
}

TEST_CASE("zero field path has zero coordinates")
{
    const fs::path dir = scratch();
    const Run r = run("path --weight 1 --hodge 1,1 --field zero --steps 5 --summary " + (dir / "s.json").string());
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    int rows = 0;
    while (std::getline(is, line)) {
        std::vector<double> v;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            v.push_back(std::stod(cell));
        REQUIRE(v.size() >= 3);
        CHECK(v[1] == 0.0);
        CHECK(v[2] == 0.0);
        ++rows;
    }
    CHECK(rows == 6);
    const json s = json::parse(slurp(dir / "s.json"));
    CHECK(s["max_lambda_dist"] == 0.0);
}

TEST_CASE("verify suites")
{
    const Run lam = run("verify --weight 1 --hodge 1,1 --suite lambda");
    CHECK(lam.code == 0);
    const json j = json::parse(lam.out);
    CHECK(j["metrics"]["rank_r"] == 1);

    CHECK(run("verify --weight 1 --hodge 1,1 --suite hc").code == 0);
    CHECK(run("verify --weight 2 --hodge 1,3,1 --suite bound --count 10").code == 0);
}

TEST_CASE("json outputs parse")
{
    const Run roots = run("roots --weight 2 --hodge 1,1,1");
    REQUIRE(roots.code == 0);
    const json r = json::parse(roots.out);
    CHECK(r["roots"].size() == 2u);
    const Run lam = run("lambda --weight 2 --hodge 1,3,1");
    REQUIRE(lam.code == 0);
    CHECK(json::parse(lam.out)["rank"] == 2);
    const Run sample = run("sample --weight 1 --hodge 1,1 --count 4");
    REQUIRE(sample.code == 0);
    CHECK(json::parse(sample.out)["samples"].size() == 4u);
    const Run aff = run("affine --weight 1 --hodge 2,2 --dim 2 --count 5");
    CHECK(aff.code == 0);
    CHECK(json::parse(aff.out)["points"].size() == 5u);
}
