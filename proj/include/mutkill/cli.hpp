#pragma once

#include "killability.hpp"
#include "mutation.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mutkill
{

enum class exit_code
{
    ok = 0,
    model_error = 1,
    budget = 2
};

struct run_config
{
    std::string command;  // validate, mutants, kill, testsuite, score, determinize, hyper
    std::string model;
    std::size_t bound = 7;
    std::string mode = "definite";  // potential, definite, equivalence, hyper
    std::vector<std::string> ops;
    bool include_init = true;
    bool determinize = false;
    int workers = 1;
    std::uint64_t seed = 0;
    std::uint64_t budget = default_budget;
    std::string out_dir;
    std::string format = "json";
    std::string mutant;                // kill / determinize / hyper
    std::string formula;               // hyper: formula file
    int phi = 0;                       // hyper: built-in phi k instead of a file
    std::optional<std::size_t> depth;  // validate: depth limit, fixpoint if absent
};

// Verdict from bounded hyperproperty evaluation: phi3 for definite, phi2 for
// potential kills; with determinize, phi1 on the determinized system and the
// witness is re-checked against the mutant.
[[nodiscard]] kill_verdict hyper_judge( const conditional_mutant& cm, std::size_t bound, std::uint64_t budget_limit,
                                        bool determinize, int workers = 1 );

[[nodiscard]] exit_code run( const run_config& cfg, std::ostream& out, std::ostream& err );

// Parses the command line (without argv[0]) and runs it.
[[nodiscard]] int run_cli( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace mutkill
