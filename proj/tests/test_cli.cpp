#include "cantor_ei/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cantor_ei;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    args.push_back("--quiet");
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> body_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

bool has_line(const std::string& text, const std::string& line)
{
    for (const auto& l : body_lines(text))
        if (l == line) return true;
    return false;
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "cantor_ei_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("theta-exact")
    {
        auto r = run({"theta-exact", "--map", "mx_mod1:3", "--level", "6", "--gaps", "6"});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "theta 1/3"));
        CHECK(r.out.rfind("# cantor-ei " + std::string(cli::version), 0) == 0);
        CHECK(r.out.find("# config_hash: ") != std::string::npos);

        auto nine = run({"theta-exact", "--map", "mx_mod1:9", "--level", "4", "--gaps", "auto"});
        CHECK(nine.code == 0);
        CHECK(has_line(nine.out, "theta 5/9"));

        auto csv = run({"theta-exact", "--map", "mx_mod1:5", "--level", "2", "--level-max", "4", "--gaps", "auto"});
        CHECK(csv.code == 0);
        auto lines = body_lines(csv.out);
        REQUIRE(lines.size() == 4);
        CHECK(lines[0] == "level,q,mu_U,mu_A,theta");
        CHECK(lines[1].substr(lines[1].rfind(',') + 1) == "8/25");
    }

    TEST_CASE("digraph")
    {
        auto r = run({"digraph", "--m", "3", "--q", "1", "--dump-matrix"});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "dim 5"));
        CHECK(has_line(r.out, "zero_one true"));
        int pairs = 0;
        for (const auto& l : body_lines(r.out)) {
            std::istringstream in(l);
            int a, b;
            std::string rest;
            if ((in >> a >> b) && !(in >> rest)) ++pairs;
        }
        CHECK(pairs == 8);
        CHECK(has_line(r.out, "3 1"));

        auto k = run({"digraph", "--m", "3", "--q", "1", "--k", "0", "--depth", "6"});
        CHECK(k.code == 0);
        CHECK(has_line(k.out, "vertices 0 2"));
        CHECK(has_line(k.out, "principal_submatrix true"));
        CHECK(has_line(k.out, "rho_mk 2"));
    }

    TEST_CASE("ifs-theta and counts")
    {
        auto r = run({"ifs-theta", "--k", "2", "--n", "4", "--check-identity"});
        CHECK(r.code == 0);
        CHECK(r.out.find("5/9") != std::string::npos);
        CHECK(r.out.find("false") == std::string::npos);

        auto spec = scratch("quarters.ifs");
        std::ofstream(spec) << "1/4 0\n1/4 3/4\n";
        auto q = run({"ifs-theta", "--spec", spec.string(), "--k", "1", "--n", "3"});
        CHECK(q.code == 0);
        CHECK(q.out.find("1/2") != std::string::npos);

        auto c = run({"counts", "--m", "3", "--q", "1", "--n-max", "4", "--depth-extra", "4"});
        CHECK(c.code == 0);
        CHECK(c.out.find("16") != std::string::npos);
    }

    TEST_CASE("sweep and repro are byte-identical across runs and thread counts")
    {
        std::vector<std::string> args{"repro", "fig3", "--n", "5000", "--ell", "50", "--seed", "7"};
        auto a = run(args);
        auto b = run(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        auto threaded = args;
        threaded.insert(threaded.begin(), {"--threads", "4"});
        CHECK(run(threaded).out == a.out);
        CHECK(a.out.find("map,observable,n,ell,seed,u,q,mean_theta,sd_theta,defined_count") != std::string::npos);

        auto s = run({"sweep", "--map", "mx_mod1:3", "--n", "1000", "--ell", "8", "--u-min", "2", "--u-max", "4",
                      "--q", "1,5"});
        REQUIRE(s.code == 0);
        auto lines = body_lines(s.out);
        CHECK(lines.size() == 1 + 3 * 2);
        CHECK(lines[1].rfind("mx_mod1:3,ladder,1000,8,", 0) == 0);
    }

    TEST_CASE("simulate writes a summary and optional dumps")
    {
        auto dir = scratch("dump");
        std::filesystem::remove_all(dir);
        auto r = run({"simulate", "--map", "mx_mod1:5", "--n", "100", "--ell", "3", "--seed", "1", "--dump-dir",
                      dir.string()});
        CHECK(r.code == 0);
        auto lines = body_lines(r.out);
        REQUIRE(lines.size() == 4);
        CHECK(lines[0] == "orbit,x0,max_level,cap_hits");
        std::size_t files = 0;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            ++files;
            std::ifstream in(entry.path());
            int count = 0;
            for (std::string l; std::getline(in, l);) ++count;
            CHECK(count == 100);
        }
        CHECK(files == 3);
    }

    TEST_CASE("config file values yield to flags")
    {
        auto cfg = scratch("run.cfg");
        std::ofstream(cfg) << "# test config\nmap = mx_mod1:9\nlevel = 3\ngaps = auto\n";
        auto r = run({"theta-exact", "--config", cfg.string()});
        CHECK(r.code == 0);
        CHECK(has_line(r.out, "theta 5/9"));
        auto o = run({"theta-exact", "--config", cfg.string(), "--map", "mx_mod1:3", "--gaps", "3"});
        CHECK(o.code == 0);
        CHECK(has_line(o.out, "theta 1/3"));
        // the canonical config hashes identical runs identically
        auto again = run({"theta-exact", "--map", "mx_mod1:9", "--level", "3", "--gaps", "auto"});
        auto hash = [](const std::string& s) {
            auto p = s.find("# config_hash: ");
            return s.substr(p, s.find('\n', p) - p);
        };
        CHECK(hash(again.out) == hash(r.out));
    }

    TEST_CASE("output file")
    {
        auto path = scratch("theta.txt");
        auto r = run({"-o", path.string(), "theta-exact", "--map", "mx_mod1:3", "--level", "2", "--gaps", "2"});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        std::ifstream in(path);
        std::stringstream text;
        text << in.rdbuf();
        CHECK(has_line(text.str(), "theta 1/3"));
    }

    TEST_CASE("exit codes")
    {
        CHECK(run({"theta-exact", "--map", "tent", "--level", "2"}).code == cli::exit_code::config);
        CHECK(run({"frobnicate"}).code == cli::exit_code::config);
        CHECK(run({"sweep", "--map", "mx_mod1:3", "--n", "-5"}).code == cli::exit_code::config);
        CHECK(run({"--max-depth", "4", "theta-exact", "--map", "mx_mod1:3", "--level", "6", "--gaps", "1"}).code ==
              cli::exit_code::resource);
        CHECK(run({"--max-matrix-dim", "100", "digraph", "--m", "10", "--q", "3"}).code == cli::exit_code::resource);
        CHECK(run({"-o", "/nonexistent/dir/out.txt", "theta-exact", "--map", "mx_mod1:3", "--level", "2"}).code ==
              cli::exit_code::io);
        CHECK(run({"theta-exact", "--config", "/nonexistent/run.cfg"}).code == cli::exit_code::io);
        auto nc = run({"digraph", "--m", "5", "--q", "2", "--tol", "1e-15", "--max-iterations", "1"});
        CHECK(nc.code == cli::exit_code::nonconvergence);
        CHECK(nc.err.find("last") != std::string::npos);
        CHECK(run({"--help"}).code == cli::exit_code::ok);
    }
}
