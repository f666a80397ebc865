#pragma once

#include <hipn/net.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hipn {

// Two-counter machine. Text form, one rule per line:
//   q0: INC 1 -> q1
//   q1: JZDEC 2 -> q2 / q3     (nonzero branch / zero branch)
//   q3: HALT
// The first rule's state is initial; exactly one state halts.
struct CounterRule {
    enum class Op { Inc, JzDec, Halt };
    Op op = Op::Halt;
    int counter = 0;            // 1 or 2
    std::size_t next = 0;       // INC successor, JZDEC nonzero branch
    std::size_t zero_next = 0;  // JZDEC zero branch
};

struct CounterMachine {
    std::vector<std::string> states;
    std::vector<CounterRule> rules;  // one per state
    std::size_t initial = 0;
    std::size_t final_state = 0;
};

CounterMachine parse_counter_machine(std::string_view text, const std::string& file = "<machine>");
std::string render_counter_machine(const CounterMachine& cm);

// Runs the machine deterministically. True when it halts, false when a configuration
// repeats, nullopt when neither happens within max_steps.
std::optional<bool> machine_halts(const CounterMachine& cm, std::size_t max_steps = 1'000'000);

struct CompiledMachine {
    Net net;
    Marking cover_target;
    PlaceId sum = 0;  // S: one token per increment not yet matched by a decrement
    PlaceId counter1 = 0;
    PlaceId counter2 = 0;
    PlaceId accept = 0;
    std::vector<PlaceId> control;  // places that carry the single control token
    std::optional<PlaceId> dump;   // transfer variant only
};

// Zero tests become resets on the counters.
CompiledMachine compile_minsky(const CounterMachine& cm);
// Zero tests become transfers of the counters into a dump place.
CompiledMachine compile_minsky_transfer(const CounterMachine& cm);

// Matrix iteration instance: is M^k v0 >= 0 for every k?
// Text form: n, then n rows of n integers, then the n entries of v0.
struct PositivityInstance {
    std::size_t n = 0;
    std::vector<std::vector<Tokens>> matrix;  // matrix[row][column]
    std::vector<Tokens> v0;
};

PositivityInstance parse_positivity(std::string_view text, const std::string& file = "<instance>");

struct PositivityNet {
    Net net;
    PlaceId fuel = 0;       // G: firings left in the current round
    PlaceId fuel_next = 0;  // G': fuel for the next round
    std::vector<PlaceId> value;                // u_i
    std::vector<PlaceId> next_value;           // u'_i
    std::vector<std::vector<PlaceId>> share;   // share[i][j]: from u_i towards u'_j
    std::vector<TransitionId> spread;          // t_i
    std::vector<std::vector<TransitionId>> route;  // route[i][j]
    TransitionId restart = 0;                  // t_R
};

// Throws Error for a negative v0 entry.
PositivityNet compile_positivity(const PositivityInstance& inst);

// v0, M v0, ..., M^k v0.
std::vector<std::vector<Tokens>> matrix_iterates(const PositivityInstance& inst, std::size_t k);

struct PhaseReport {
    std::vector<std::vector<Tokens>> values;  // u-vector before the first round and after each round
    std::size_t firings = 0;
};

// Runs `rounds` rounds of the canonical schedule: every spread transition, then increasing routes,
// then decreasing routes, then the restart. Requires M^j v0 >= 0 for j <= rounds.
PhaseReport simulate_phases(const PositivityNet& pn, const PositivityInstance& inst, std::size_t rounds);

// Bookkeeping identity that holds at every marking inside a round started from u-vector `start`.
bool round_invariant_holds(const PositivityNet& pn, const PositivityInstance& inst, const Marking& m,
                           const std::vector<Tokens>& start);

}  // namespace hipn
