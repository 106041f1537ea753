// maxstop: config-driven front end.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "maxstop/error.hpp"
#include "maxstop/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Optimal stopping for the maximum of a diffusion"};
    std::string command;
    std::string config;
    std::string out_dir;
    app.add_option("command", command, "solve, payoff, embed, simulate, compare, constants or validate")->required();
    app.add_option("config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    app.add_option("-o,--out", out_dir, "output directory (overrides output.dir)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    std::optional<maxstop::Command> cmd;
    try {
        cmd = maxstop::parse_command(command);
    } catch (const maxstop::Error& e) {
        maxstop::Json j{{"error", "PARSE_ERROR"}, {"exit_code", 2}, {"message", e.what()}};
        std::cerr << j.dump() << '\n';
        return 2;
    }
    std::optional<std::filesystem::path> out;
    if (!out_dir.empty()) out = out_dir;
    return maxstop::run_main(config, cmd, out, std::cout, std::cerr);
}
