// Acceptance gate: each criterion prints exactly one PASS/FAIL line and
// the process exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "finsler/config.hpp"
#include "finsler/crofton.hpp"
#include "finsler/funk.hpp"
#include "finsler/report.hpp"
#include "finsler/reproduce.hpp"
#include "finsler/rng.hpp"

using namespace finsler;

namespace {

int failures = 0;

void verdict(int number, const std::string& description, bool pass, const std::string& detail) {
    std::cout << "criterion " << number << " (" << description << "): "
              << (pass ? "PASS" : "FAIL") << " [" << detail << "]\n";
    if (!pass) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double max_rel_err(const ExperimentReport& rep) {
    double m = 0;
    for (const auto& r : rep.rows) m = std::max(m, r.rel_err);
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    RunConfig cfg;  // defaults: seed 42, 512 nodes, 1e6 Crofton samples

    {  // 1. Funk-lemma oracle: 200 draws, rel <= 1e-8, < 5 s
        Timer t;
        auto rep = stages::stage_funk(cfg);
        double wall = t.seconds();
        bool pass = rep.overall_pass() && rep.rows.size() == 200 && wall < 5.0;
        verdict(1, "Funk-lemma oracle, 200 draws, rel err <= 1e-8", pass,
                "max rel err " + fmt(max_rel_err(rep)) + ", " + fmt(wall) + " s");
    }

    {  // 2. Area-integrand oracle on the lambda x |x| grid, rel <= 1e-7, < 10 s
        Timer t;
        auto rep = stages::stage_area(cfg);
        double wall = t.seconds();
        bool pass = rep.overall_pass() && wall < 10.0;
        verdict(2, "Hausdorff area integrand vs closed form, rel err <= 1e-7", pass,
                "max rel err " + fmt(max_rel_err(rep)) + ", " + fmt(wall) + " s");
    }

    {  // 3. lambda = 0 degeneration to |a| within 1e-12 relative, 1e4 draws
        double worst = 0;
        for (int k = 0; k < 10000; ++k) {
            CounterRng rng(cfg.seed, k, 333);
            Vec3 x = rng.ball(3.0);
            Bivec3 a = Bivec3::from_coords(rng.uniform(0.01, 5.0) * rng.unit_sphere());
            double rel = std::abs(phi_lambda_area_integrand(0.0, x, a) - norm(a)) / norm(a);
            worst = std::max(worst, rel);
        }
        verdict(3, "lambda = 0 area integrand equals |a| within 1e-12", worst <= 1e-12,
                "max rel err " + fmt(worst));
    }

    {  // 4. Hamel residual of phi_lambda <= 1e-6, 100 draws per lambda
        auto rep = stages::stage_hamel(cfg);
        double worst = 0;
        for (const auto& r : rep.rows) worst = std::max(worst, r.computed);
        verdict(4, "Hamel residual <= 1e-6 for lambda in {0, 0.5, 1, 2}", rep.overall_pass(),
                "max residual " + fmt(worst));
    }

    {  // 5. geodesic straightness and the conformal counterexample
        auto rep = stages::stage_geodesic(cfg);
        double straight = 0, conformal = 0;
        for (const auto& r : rep.rows) {
            if (r.inputs.contains("lambda"))
                straight = std::max(straight, r.computed);
            else
                conformal = r.computed;
        }
        verdict(5, "geodesic straightness <= 1e-6, conformal deviation > 1e-2",
                rep.overall_pass(),
                "max deviation " + fmt(straight) + ", conformal " + fmt(conformal));
    }

    {  // 6. Berck residual vs closed form on {0.25, 0.5, 1, 2}^2, < 5 s
        Timer t;
        RunConfig c6 = cfg;
        c6.lambdas = {0.25, 0.5, 1.0, 2.0};
        auto rep = stages::stage_berck(c6);
        double wall = t.seconds();
        bool pinned = false;
        for (const auto& r : rep.rows) {
            if (r.inputs.at("lambda") == 1.0 && r.inputs.at("t") == 1.0)
                pinned = std::abs(r.computed - (-0.0832863)) <= 1e-4;
        }
        bool pass = rep.overall_pass() && pinned && wall < 5.0;
        verdict(6, "Berck residual matches closed form within max(1e-4 rel, 1e-8 abs)", pass,
                std::to_string(rep.rows.size()) + " grid points, " + fmt(wall) + " s");
    }

    {  // 7. Euclidean Crofton with 1e6 lines, seed 42, < 60 s
        Timer t;
        auto rep = stages::stage_crofton(cfg);
        double wall = t.seconds();
        bool pass = rep.overall_pass() && wall < 60.0;
        std::string detail;
        for (const auto& r : rep.rows)
            detail += r.inputs.at("mesh").get<std::string>() + " " + fmt(r.computed) + " ";
        verdict(7, "Crofton Monte Carlo: disc within 4 sigma of pi, sphere of 4 pi", pass,
                detail + fmt(wall) + " s");
    }

    {  // 8. reduction identity cosphere = 2 x codisc within 0.5%, < 120 s
        Timer t;
        auto rep = stages::stage_reduce(cfg);
        double wall = t.seconds();
        bool pass = rep.overall_pass() && wall < 120.0;
        verdict(8, "cosphere integral = 2 x codisc integral within 0.5%", pass,
                "max rel err " + fmt(max_rel_err(rep)) + ", " + fmt(wall) + " s");
    }

    {  // 9. Holmes-Thompson sanity on the flat disc
        double ht1 = holmes_thompson_area(flat_disc_patch(), euclidean_norm());
        double ht2 = holmes_thompson_area(flat_disc_patch(), scaled_euclidean_norm(2.0));
        bool pass = std::abs(ht1 - std::numbers::pi) <= 1e-3 &&
                    std::abs(ht2 - 4.0 * std::numbers::pi) <= 4e-3;
        verdict(9, "Holmes-Thompson: pi +- 1e-3 (Euclidean), 4 pi +- 4e-3 (2|v|)", pass,
                "got " + fmt(ht1) + " and " + fmt(ht2));
    }

    {  // 10. reproduce pipeline with lambda in {0, 1}: certificate + exit code
        bool pass = false;
        std::string detail = "cli binary path not provided";
        if (!cli.empty()) {
            auto dir = std::filesystem::temp_directory_path() / "finsler_acceptance_c10";
            std::filesystem::remove_all(dir);
            std::string cmd = cli + " reproduce --lambda.list 0,1 --crofton.samples 200000" +
                              " --reduce.surface_s 8 --reduce.surface_t 16" +
                              " --out " + dir.string() + " > " + (dir.string() + ".log") +
                              " 2>&1";
            std::filesystem::create_directories(dir);
            int code = std::system(cmd.c_str());
            bool exit_ok = code == 0;
            bool statements_ok = false;
            std::ifstream in(dir / "certificate.json");
            if (in) {
                json j = json::parse(in);
                std::string s0, s1;
                for (const auto& cert : j.at("extra")) {
                    if (cert.at("lambda") == 0.0) s0 = cert.at("statement");
                    if (cert.at("lambda") == 1.0) s1 = cert.at("statement");
                }
                statements_ok = s0 == "consistent with Crofton formula" &&
                                s1 == "no Crofton formula for the Hausdorff area integrand" &&
                                j.at("verdict") == "pass";
            }
            // a deliberately impossible tolerance must flip the exit code
            int bad = std::system((cli + " funk --funk.tol 1e-30 --out " + dir.string() +
                                   " > /dev/null 2>&1")
                                      .c_str());
            pass = exit_ok && statements_ok && bad != 0;
            detail = "exit " + std::to_string(code) + ", statements " +
                     (statements_ok ? "ok" : "wrong") + ", failing run exit " +
                     std::to_string(bad);
        }
        verdict(10, "reproduce with lambda {0, 1}: certificates and exit codes", pass, detail);
    }

    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " + std::to_string(failures) + " criteria failed")
              << '\n';
    return failures == 0 ? 0 : 1;
}
