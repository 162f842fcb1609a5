#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "purepairs/campaign.hpp"

using namespace purepairs;

namespace {

// Wall-clock ceilings in seconds; 0 means none.
struct Criterion {
    int id;
    const char * title;
    const char * suite;
    double seconds;
};

const std::vector<Criterion> criteria{
    {1, "congestion oracle agreement", "congestion-oracle-agreement", 120},
    {2, "forest characterization", "forest-characterization", 0},
    {3, "cycle values", "cycle-values", 0},
    {4, "long-branch weak certificates", "longbranch-certificates", 300},
    {5, "buildable implies congestion bound", "buildable-congestion", 0},
    {6, "weak buildability embeds into strong", "weakbuild-embedding", 0},
    {7, "expanding contraction postconditions", "blockexpand", 0},
    {8, "machinery invariant suites", "machinery-invariants", 0},
    {9, "forcing oracle equivalence", "force-oracle", 0},
    {10, "constants ledger", "constants-ledger", 0},
    {11, "counterexample experiment", "counterexample", 600},
};

std::string summary(const Report & r)
{
    std::string out;
    for (const auto & p : r.properties) {
        if (!out.empty())
            out += "; ";
        out += (p.pass ? "" : "FAILED ") + p.name + " [" + p.tolerance + "] " + p.detail.dump();
    }
    return out;
}

std::string capture(const std::string & cmd)
{
    std::string out;
    FILE * pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe)
        return "<popen failed>";
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    const int status = pclose(pipe);
    return out + "\n<status " + std::to_string(status) + ">";
}

/// Every subcommand, run twice on fixed inputs; reports must match byte for byte.
bool determinism(const std::string & cli, std::string & detail)
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("purepairs-accept-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto write = [&](const char * name, const std::string & text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    const std::string c6 = write("c6.txt", "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    const std::string p3 = write("p3.txt", "3 2\n0 1\n1 2\n");
    const std::string host = write("host.txt", write_edge_list(gnp(12, 0.4, 5)));
    const std::string cert = write("cert.json", certificate_to_json(one_handle_certificate(15, 15)).dump());
    const std::vector<std::string> commands{
        "congestion " + c6 + " --method both",
        "buildable " + c6 + " --beta 3 --embed",
        "blockade stats " + host + " --blocks 4",
        "machinery bilevelling --seed 3",
        "machinery expansion --seed 2",
        "ledger " + cert + " --c 1/2 --epsilon",
        "force " + host + " " + p3 + " --blocks 6 --mode relaxed",
        "counterexample --n 20,30 --trials 4 --seed 11",
        "campaign cycle-values --seed 4",
        "campaign force-oracle --count 50 --seed 4 --format csv",
    };
    bool ok = true;
    int same = 0;
    for (const auto & c : commands) {
        const std::string cmd = cli + " " + c;
        const std::string a = capture(cmd), b = capture(cmd);
        if (a == b && a.find("<status 0>") != std::string::npos) {
            ++same;
        } else {
            ok = false;
            detail += " differs or fails: " + c + ";";
        }
    }
    fs::remove_all(dir);
    detail = std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical" + detail;
    return ok;
}

}  // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Acceptance criteria: one PASS/FAIL line per criterion."};
    int only = 0;
    std::uint64_t seed = 0;
    std::string cli = PUREPAIRS_CLI_PATH;
    app.add_option("--criterion", only, "run a single criterion (1-12)")->check(CLI::Range(0, 12));
    app.add_option("--seed", seed)->capture_default_str();
    app.add_option("--cli", cli, "path of the purepairs binary")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    bool all = true;
    for (const auto & c : criteria) {
        if (only && only != c.id)
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Report r = campaign(c.suite, CampaignParams{seed, 0, std::uint64_t{1} << 24});
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.seconds == 0 || secs < c.seconds;
        const bool pass = r.pass() && in_time;
        all = all && pass;
        std::printf("criterion %d %s: %s (%.1fs%s) %s\n", c.id, c.title, pass ? "PASS" : "FAIL", secs,
                    in_time ? "" : ", over time limit", summary(r).c_str());
    }
    if (!only || only == 12) {
        std::string detail;
        const bool pass = determinism(cli, detail);
        all = all && pass;
        std::printf("criterion 12 CLI determinism: %s %s\n", pass ? "PASS" : "FAIL", detail.c_str());
    }
    std::fflush(stdout);
    return all ? 0 : 1;
}
