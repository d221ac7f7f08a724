// Exit-code and output contract checks for the qcorr CLI. argv[1] is the
// binary path; every check prints one PASS/FAIL line.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

int g_failures = 0;

void check(const std::string& label, bool ok, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", label.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& cmd) {
    const std::string out_path = "cli_contract_stdout.tmp";
    const std::string err_path = "cli_contract_stderr.tmp";
    const int status =
        std::system((cmd + " > " + out_path + " 2> " + err_path).c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream out(out_path, std::ios::binary);
    std::stringstream so;
    so << out.rdbuf();
    r.out = so.str();
    std::ifstream err(err_path, std::ios::binary);
    std::stringstream se;
    se << err.rdbuf();
    r.err = se.str();
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_contract <qcorr-binary>\n";
        return 2;
    }
    const std::string cli = std::string("\"") + argv[1] + "\"";

    {
        const RunResult r =
            run(cli + " trajectory --c1 1 --c3 0.6 --gamma 1 --tmax 1.2 --steps 241 "
                      "--kinds trace,bures2");
        const auto lines = lines_of(r.out);
        bool header_ok = lines.size() > 3 && lines[1] ==
            "t,c1,c2,c3,Q_trace,Q_bures2,Q_hellinger2,Q_relent,Q_hs2,E_bures2,regime";
        int frozen_rows = 0;
        bool frozen_value_ok = true;
        for (const auto& line : lines) {
            if (line.find(",frozen") == std::string::npos) continue;
            ++frozen_rows;
            // Q_trace is column 5
            std::stringstream ss(line);
            std::string field;
            for (int i = 0; i < 5; ++i) std::getline(ss, field, ',');
            if (std::abs(std::stod(field) - 0.3) > 1e-6) frozen_value_ok = false;
        }
        check("trajectory emits the CSV schema with a frozen plateau",
              r.exit_code == 0 && header_ok && frozen_rows >= 40 && frozen_value_ok,
              "exit " + std::to_string(r.exit_code) + ", frozen rows " +
                  std::to_string(frozen_rows));
        check("trajectory footer carries freezing reports",
              !lines.empty() && lines.back().rfind("# freezing ", 0) == 0);
    }

    {
        const RunResult a =
            run(cli + " trajectory --c1 1 --c3 0.6 --gamma 1 --tmax 1.2 --steps 61");
        const RunResult b =
            run(cli + " trajectory --c1 1 --c3 0.6 --gamma 1 --tmax 1.2 --steps 61");
        check("trajectory output is deterministic", a.exit_code == 0 && a.out == b.out);
    }

    {
        const RunResult r = run(cli + " trajectory --c1 0 --c3 0 --gamma 1 --tmax 1 --steps 11");
        bool all_classical = r.exit_code == 0;
        int rows = 0;
        for (const auto& line : lines_of(r.out)) {
            if (line.empty() || line[0] == '#' || line[0] == 't') continue;
            ++rows;
            if (line.find(",classical") == std::string::npos) all_classical = false;
        }
        check("maximally mixed trajectory is flagged classical", all_classical && rows == 11,
              "rows " + std::to_string(rows));
    }

    {
        const RunResult r = run(cli + " trajectory --c1 2 --c3 0 --gamma 1 --tmax 1 --steps 11");
        check("invalid triple exits 3 citing the tetrahedron",
              r.exit_code == 3 && r.err.find("tetrahedron") != std::string::npos,
              "exit " + std::to_string(r.exit_code));
    }

    {
        const auto start = std::chrono::steady_clock::now();
        const RunResult r = run(cli + " verify --kinds trace --grid 2");
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool json_ok = false;
        try {
            const nlohmann::json doc = nlohmann::json::parse(r.out);
            json_ok = doc.at("pass").get<bool>() &&
                      doc.at("kinds").at("trace").at("pass").get<bool>();
        } catch (...) {
        }
        check("verify --kinds trace --grid 2 passes quickly",
              r.exit_code == 0 && json_ok && elapsed <= 10.0,
              "exit " + std::to_string(r.exit_code) + ", " + std::to_string(elapsed) + " s");
    }

    {
        const RunResult r = run(cli + " verify --kinds bogus");
        check("unknown kind exits 2", r.exit_code == 2);
    }

    {
        const RunResult r = run(cli + " channel-info --rephasing 0.8");
        bool ok = false;
        try {
            const nlohmann::json doc = nlohmann::json::parse(r.out);
            ok = doc.at("kraus").size() == 8 &&
                 doc.at("completeness_residual").get<double>() <= 1e-12 &&
                 doc.at("choi_min_eigenvalue").get<double>() >= -1e-10;
        } catch (...) {
        }
        check("channel-info --rephasing 0.8 lists 8 complete Kraus operators",
              r.exit_code == 0 && ok);
    }

    {
        const RunResult r = run(cli + " channel-info --local 3 --r 0.5");
        bool ok = false;
        try {
            const nlohmann::json doc = nlohmann::json::parse(r.out);
            ok = doc.at("kraus").size() == 4 &&
                 doc.at("completeness_residual").get<double>() <= 1e-12;
        } catch (...) {
        }
        check("channel-info --local 3 --r 0.5 lists 4 product Kraus operators",
              r.exit_code == 0 && ok);
    }

    {
        const RunResult r = run(cli + " channel-info --rephasing 1.5");
        check("out-of-range rephasing exits 2", r.exit_code == 2);
    }

    {
        const RunResult r = run(cli + " discord --c1 1 --c2 -0.6 --c3 0.6 --kinds trace");
        bool ok = false;
        try {
            const nlohmann::json doc = nlohmann::json::parse(r.out);
            const auto& item = doc.at("results").at(0);
            ok = std::abs(item.at("value").get<double>() - 0.3) <= 1e-8 &&
                 item.at("k").get<int>() == 1;
        } catch (...) {
        }
        check("discord reports the trace value 0.3 for the reference state",
              r.exit_code == 0 && ok);
    }

    {
        const RunResult r =
            run(cli + " closest-classical --c1 1 --c2 -1 --c3 1 --kinds trace");
        bool ok = false;
        try {
            const nlohmann::json doc = nlohmann::json::parse(r.out);
            ok = doc.at("results").at(0).at("ties").size() == 3;
        } catch (...) {
        }
        check("closest-classical reports axis ties for the Bell state", r.exit_code == 0 && ok);
    }

    {
        std::ofstream table("cli_contract_rate.csv");
        table << "0,0\n1,2\n2,2\n3,6\n";
        table.close();
        const RunResult r =
            run(cli + " trajectory --c1 1 --c3 0.6 --gamma 1 --tmax 3 --steps 61 "
                      "--rate-table cli_contract_rate.csv --kinds trace");
        int plateau_count = 0;
        for (const auto& line : lines_of(r.out)) {
            if (line.rfind("# freezing ", 0) != 0) continue;
            try {
                const nlohmann::json doc = nlohmann::json::parse(line.substr(11));
                plateau_count =
                    static_cast<int>(doc.at("trace").at("plateaus").size());
            } catch (...) {
            }
        }
        check("non-Markovian rate table yields multiple plateaus",
              r.exit_code == 0 && plateau_count >= 2,
              "plateaus " + std::to_string(plateau_count));
    }

    std::printf("cli contract: %s\n", g_failures == 0 ? "all checks passed" : "FAILURES");
    return g_failures == 0 ? 0 : 1;
}
