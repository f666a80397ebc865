#include <hipn/compile.hpp>

#include "transforms/draft.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace hipn {

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct PendingRule {
    CounterRule rule;
    std::string next, zero_next;
    std::size_t line, next_col, zero_col;
};

}  // namespace

CounterMachine parse_counter_machine(std::string_view text, const std::string& file)
{
    CounterMachine cm;
    std::map<std::string, std::size_t> index;
    std::vector<PendingRule> pending;
    std::optional<std::size_t> halt_line;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string line(text.substr(start, end - start));
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;

        auto col_of = [&](std::size_t pos) { return pos + 1; };
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError(file, line_no, 1, "expected 'STATE: RULE'");
        std::string state = trim(std::string_view(line).substr(0, colon));
        if (!is_valid_name(state)) throw ParseError(file, line_no, 1, "invalid state name '" + state + "'");
        if (index.count(state)) throw ParseError(file, line_no, 1, "state '" + state + "' has two rules");
        index[state] = cm.states.size();
        cm.states.push_back(state);

        std::istringstream words(line.substr(colon + 1));
        std::string op;
        words >> op;
        auto word_col = [&](const std::string& w) { return col_of(line.find(w, colon)); };
        PendingRule pr{};
        pr.line = line_no;
        if (op == "HALT") {
            if (halt_line) throw ParseError(file, line_no, word_col(op), "a second HALT state");
            halt_line = line_no;
            cm.final_state = cm.states.size() - 1;
            pr.rule.op = CounterRule::Op::Halt;
        } else if (op == "INC" || op == "JZDEC") {
            std::string counter, arrow, a, slash, b;
            words >> counter >> arrow >> a;
            if (counter != "1" && counter != "2")
                throw ParseError(file, line_no, counter.empty() ? line.size() + 1 : word_col(counter),
                                 "counter must be 1 or 2");
            if (arrow != "->") throw ParseError(file, line_no, line.size() + 1, "expected '->'");
            if (a.empty()) throw ParseError(file, line_no, line.size() + 1, "expected a state name");
            pr.rule.counter = counter == "1" ? 1 : 2;
            pr.next = a;
            pr.next_col = word_col(a);
            if (op == "INC") {
                pr.rule.op = CounterRule::Op::Inc;
            } else {
                pr.rule.op = CounterRule::Op::JzDec;
                words >> slash >> b;
                if (slash != "/") throw ParseError(file, line_no, line.size() + 1, "expected '/' before the zero branch");
                if (b.empty()) throw ParseError(file, line_no, line.size() + 1, "expected a state name");
                pr.zero_next = b;
                pr.zero_col = line.rfind(b) + 1;
            }
        } else {
            throw ParseError(file, line_no, op.empty() ? line.size() + 1 : word_col(op),
                             "expected INC, JZDEC or HALT");
        }
        std::string extra;
        if (words >> extra) throw ParseError(file, line_no, word_col(extra), "unexpected '" + extra + "'");
        pending.push_back(pr);
    }
    if (cm.states.empty()) throw ParseError(file, line_no, 1, "empty machine");
    if (!halt_line) throw ParseError(file, line_no, 1, "no HALT state");

    for (PendingRule& pr : pending) {
        if (pr.rule.op == CounterRule::Op::Halt) {
            cm.rules.push_back(pr.rule);
            continue;
        }
        auto it = index.find(pr.next);
        if (it == index.end()) throw ParseError(file, pr.line, pr.next_col, "unknown state '" + pr.next + "'");
        pr.rule.next = it->second;
        if (pr.rule.op == CounterRule::Op::JzDec) {
            auto z = index.find(pr.zero_next);
            if (z == index.end())
                throw ParseError(file, pr.line, pr.zero_col, "unknown state '" + pr.zero_next + "'");
            pr.rule.zero_next = z->second;
        }
        cm.rules.push_back(pr.rule);
    }
    return cm;
}

std::string render_counter_machine(const CounterMachine& cm)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < cm.states.size(); ++i) {
        const CounterRule& r = cm.rules[i];
        out << cm.states[i] << ": ";
        switch (r.op) {
        case CounterRule::Op::Halt: out << "HALT"; break;
        case CounterRule::Op::Inc: out << "INC " << r.counter << " -> " << cm.states[r.next]; break;
        case CounterRule::Op::JzDec:
            out << "JZDEC " << r.counter << " -> " << cm.states[r.next] << " / " << cm.states[r.zero_next];
            break;
        }
        out << '\n';
    }
    return out.str();
}

std::optional<bool> machine_halts(const CounterMachine& cm, std::size_t max_steps)
{
    std::set<std::tuple<std::size_t, std::uint64_t, std::uint64_t>> seen;
    std::size_t q = cm.initial;
    std::uint64_t c[3] = {0, 0, 0};
    for (std::size_t step = 0; step <= max_steps; ++step) {
        if (q == cm.final_state) return true;
        if (!seen.insert({q, c[1], c[2]}).second) return false;
        const CounterRule& r = cm.rules[q];
        if (r.op == CounterRule::Op::Inc) {
            ++c[r.counter];
            q = r.next;
        } else if (c[r.counter] > 0) {
            --c[r.counter];
            q = r.next;
        } else {
            q = r.zero_next;
        }
    }
    return std::nullopt;
}

namespace {

CompiledMachine compile(const CounterMachine& cm, bool use_transfer)
{
    if (cm.rules.size() != cm.states.size() || cm.final_state >= cm.states.size() || cm.initial >= cm.states.size())
        throw Error("malformed counter machine");
    for (std::size_t i = 0; i < cm.rules.size(); ++i) {
        const CounterRule& r = cm.rules[i];
        if ((r.op == CounterRule::Op::Halt) != (i == cm.final_state))
            throw Error("exactly the final state must halt");
        if (r.op != CounterRule::Op::Halt &&
            (r.counter < 1 || r.counter > 2 || r.next >= cm.states.size() || r.zero_next >= cm.states.size()))
            throw Error("malformed rule at state '" + cm.states[i] + "'");
    }

    CompiledMachine out;
    detail::NetDraft d;
    out.sum = d.add_place("S", 0, "increments not yet matched by a decrement");
    out.counter1 = d.add_place("C1", 0, "counter 1");
    out.counter2 = d.add_place("C2", 0, "counter 2");
    const PlaceId counter[3] = {0, out.counter1, out.counter2};

    std::vector<PlaceId> state(cm.states.size());
    for (std::size_t i = 0; i < cm.states.size(); ++i) {
        state[i] = d.add_place(cm.states[i], i == cm.initial ? 1 : 0, "control state " + cm.states[i]);
        out.control.push_back(state[i]);
    }

    // Shared per counter: a pending zero test and a completed reset.
    PlaceId pending[3] = {0, 0, 0};
    PlaceId cleared[3] = {0, 0, 0};
    for (int r = 1; r <= 2; ++r) {
        bool used = false;
        for (const CounterRule& rule : cm.rules) used |= rule.op == CounterRule::Op::JzDec && rule.counter == r;
        if (!used) continue;
        const std::string c = "C" + std::to_string(r);
        pending[r] = d.add_place(c + ".test", 0, "zero test of " + c + " in progress");
        cleared[r] = d.add_place(c + ".cleared", 0, c + " was emptied by the zero branch");
    }
    if (use_transfer) out.dump = d.add_place("dump", 0, "receives counters emptied by zero branches");

    for (int r = 1; r <= 2; ++r) {
        if (!pending[r]) continue;
        const std::string c = "C" + std::to_string(r);
        TransitionId clear = d.add_transition(c + ".clear", "empties " + c + " on the zero branch");
        d.transition(clear).add_pre(pending[r], Numeric{1});
        if (use_transfer) d.transition(clear).add_pre(counter[r], Transfer{*out.dump});
        else d.transition(clear).add_pre(counter[r], Reset{});
        d.transition(clear).add_post(cleared[r], 1);
    }

    for (std::size_t i = 0; i < cm.states.size(); ++i) {
        const CounterRule& r = cm.rules[i];
        const std::string& q = cm.states[i];
        if (r.op == CounterRule::Op::Inc) {
            TransitionId inc = d.add_transition(q + ".inc", "INC at " + q);
            d.transition(inc).add_pre(state[i], Numeric{1});
            d.transition(inc).add_post(state[r.next], 1);
            d.transition(inc).add_post(counter[r.counter], 1);
            d.transition(inc).add_post(out.sum, 1);
        } else if (r.op == CounterRule::Op::JzDec) {
            const PlaceId testing = d.add_place(q + ".testing", 0, "JZDEC at " + q + " waiting for its branch");
            out.control.push_back(testing);
            TransitionId test = d.add_transition(q + ".test", "starts JZDEC at " + q);
            d.transition(test).add_pre(state[i], Numeric{1});
            d.transition(test).add_post(testing, 1);
            d.transition(test).add_post(pending[r.counter], 1);

            TransitionId dec = d.add_transition(q + ".dec", "nonzero branch of JZDEC at " + q);
            d.transition(dec).add_pre(testing, Numeric{1});
            d.transition(dec).add_pre(pending[r.counter], Numeric{1});
            d.transition(dec).add_pre(counter[r.counter], Numeric{1});
            d.transition(dec).add_pre(out.sum, Numeric{1});
            d.transition(dec).add_post(state[r.next], 1);

            TransitionId zero = d.add_transition(q + ".zero", "zero branch of JZDEC at " + q);
            d.transition(zero).add_pre(testing, Numeric{1});
            d.transition(zero).add_pre(cleared[r.counter], Numeric{1});
            d.transition(zero).add_post(state[r.zero_next], 1);
        }
    }

    // Final check: S must equal C1 + C2 exactly, which fails after any lossy zero branch.
    const std::string& qn = cm.states[cm.final_state];
    const PlaceId first = state[cm.final_state];
    const PlaceId second = d.add_place(qn + ".match", 0, "final check: matching S against C2");
    const PlaceId third = d.add_place(qn + ".verify", 0, "final check: testing S for zero");
    out.accept = d.add_place("accept", 0, "honest run reached the final state");
    out.control.push_back(second);
    out.control.push_back(third);
    out.control.push_back(out.accept);

    TransitionId shift = d.add_transition(qn + ".shift", "final check: moves C1 into C2");
    d.transition(shift).add_pre(first, Numeric{1});
    d.transition(shift).add_pre(out.counter1, Numeric{1});
    d.transition(shift).add_post(first, 1);
    d.transition(shift).add_post(out.counter2, 1);
    TransitionId to_match = d.add_transition(qn + ".end_shift", "final check: ends the shift loop");
    d.transition(to_match).add_pre(first, Numeric{1});
    d.transition(to_match).add_post(second, 1);
    TransitionId match = d.add_transition(qn + ".match", "final check: cancels one S with one C2");
    d.transition(match).add_pre(second, Numeric{1});
    d.transition(match).add_pre(out.sum, Numeric{1});
    d.transition(match).add_pre(out.counter2, Numeric{1});
    d.transition(match).add_post(second, 1);
    TransitionId to_verify = d.add_transition(qn + ".end_match", "final check: ends the cancel loop");
    d.transition(to_verify).add_pre(second, Numeric{1});
    d.transition(to_verify).add_post(third, 1);
    TransitionId accept = d.add_transition(qn + ".accept", "final check: S is empty");
    d.transition(accept).add_pre(third, Numeric{1});
    d.transition(accept).add_pre(out.sum, Inhibitor{});
    d.transition(accept).add_post(out.accept, 1);

    out.net = d.build();
    out.cover_target = Marking(out.net.place_count());
    out.cover_target[out.accept] = 1;
    return out;
}

}  // namespace

CompiledMachine compile_minsky(const CounterMachine& cm)
{
    return compile(cm, false);
}

CompiledMachine compile_minsky_transfer(const CounterMachine& cm)
{
    return compile(cm, true);
}

}  // namespace hipn
