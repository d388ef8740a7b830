// Command-line front end: each subcommand reads a key = value config file
// and writes CSV outputs into --out. Exit codes: 0 success / all checks
// pass, 1 failure, 2 gradient-blow-up diagnosis from the solver.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "charcurv/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"characteristic curvature toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";

    for (const char* name : {"verify", "curvature", "trajectory", "solve", "probe", "counterexample"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key = value configuration file")->required();
        sub->add_option("--out", out_dir, "output directory for CSV files");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        charcurv::RunConfig cfg = charcurv::parse_config(read_file(config_path));
        cfg.subcommand = app.get_subcommands().front()->get_name();
        return charcurv::dispatch(cfg, out_dir, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
