#include <hipn/compile.hpp>

#include "transforms/draft.hpp"

#include <cctype>

namespace hipn {

namespace {

struct Token {
    std::string text;
    std::size_t line, column;
};

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size();) {
        char ch = text[i];
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (ch == '\n') {
            ++line;
            col = 1;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++col;
            ++i;
        } else {
            Token t{{}, line, col};
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#') {
                t.text += text[i++];
                ++col;
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

bool is_integer(const std::string& s)
{
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Tokens abs_value(const Tokens& x)
{
    return x < 0 ? Tokens(-x) : x;
}

// Fires t `count` times at once; only for numeric transitions whose pre and post places are disjoint.
void fire_batch(const Net& net, Marking& m, TransitionId t, const Tokens& count)
{
    if (count == 0) return;
    const Transition& tr = net.transitions()[t];
    for (const PreArc& a : tr.pre) {
        const auto* num = std::get_if<Numeric>(&a.kind);
        if (!num || tr.post_weight(a.place) > 0) throw Error("cannot batch-fire '" + tr.name + "'");
        if (m[a.place] < num->weight * count)
            throw Error("batch of " + count.str() + " firings of '" + tr.name + "' is not enabled");
    }
    for (const PreArc& a : tr.pre) m[a.place] -= std::get<Numeric>(a.kind).weight * count;
    for (const PostArc& a : tr.post) m[a.place] += a.weight * count;
}

}  // namespace

PositivityInstance parse_positivity(std::string_view text, const std::string& file)
{
    const std::vector<Token> toks = tokenize(text);
    std::size_t at = 0;
    auto next = [&](const char* what) -> const Token& {
        if (at >= toks.size()) {
            std::size_t line = toks.empty() ? 1 : toks.back().line;
            std::size_t col = toks.empty() ? 1 : toks.back().column + toks.back().text.size();
            throw ParseError(file, line, col, std::string("expected ") + what);
        }
        const Token& t = toks[at++];
        if (!is_integer(t.text)) throw ParseError(file, t.line, t.column, std::string("expected ") + what);
        return t;
    };

    PositivityInstance inst;
    const Token& nt = next("the dimension");
    Tokens n(nt.text);
    if (n < 1 || n > 64) throw ParseError(file, nt.line, nt.column, "dimension must be between 1 and 64");
    inst.n = static_cast<std::size_t>(n);
    inst.matrix.assign(inst.n, std::vector<Tokens>(inst.n));
    for (std::size_t r = 0; r < inst.n; ++r)
        for (std::size_t c = 0; c < inst.n; ++c) inst.matrix[r][c] = Tokens(next("a matrix entry").text);
    for (std::size_t i = 0; i < inst.n; ++i) {
        const Token& t = next("an entry of the start vector");
        inst.v0.emplace_back(t.text);
        if (inst.v0.back() < 0) throw ParseError(file, t.line, t.column, "start vector entries must be non-negative");
    }
    if (at < toks.size()) throw ParseError(file, toks[at].line, toks[at].column, "unexpected '" + toks[at].text + "'");
    return inst;
}

PositivityNet compile_positivity(const PositivityInstance& inst)
{
    const std::size_t n = inst.n;
    if (inst.matrix.size() != n || inst.v0.size() != n) throw Error("instance sizes do not match its dimension");
    for (const auto& row : inst.matrix)
        if (row.size() != n) throw Error("matrix is not square");
    for (const Tokens& x : inst.v0)
        if (x < 0) throw Error("start vector entries must be non-negative");

    // Column weight: tokens of fuel one unit of u_j needs to spend in a round.
    std::vector<Tokens> column(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) column[j] += abs_value(inst.matrix[k][j]);

    PositivityNet pn;
    detail::NetDraft d;
    Tokens fuel0 = 0;
    for (std::size_t i = 0; i < n; ++i) fuel0 += column[i] * inst.v0[i];
    pn.fuel = d.add_place("G", fuel0, "routing firings left in this round");
    pn.fuel_next = d.add_place("G'", 0, "routing firings for the next round");
    for (std::size_t i = 0; i < n; ++i)
        pn.next_value.push_back(d.add_place("u" + std::to_string(i + 1) + "'", 0, "next value of entry " +
                                                                                 std::to_string(i + 1)));
    for (std::size_t i = 0; i < n; ++i)
        pn.value.push_back(d.add_place("u" + std::to_string(i + 1), inst.v0[i], "value of entry " +
                                                                                  std::to_string(i + 1)));
    pn.share.assign(n, std::vector<PlaceId>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::string tag = std::to_string(i + 1) + "." + std::to_string(j + 1);
            pn.share[i][j] = d.add_place("u" + tag, 0, "contribution of entry " + std::to_string(i + 1) +
                                                           " to entry " + std::to_string(j + 1));
        }

    for (std::size_t i = 0; i < n; ++i) {
        const TransitionId t = d.add_transition("t" + std::to_string(i + 1), "spreads one unit of entry " +
                                                                               std::to_string(i + 1));
        d.transition(t).add_pre(pn.value[i], Numeric{1});
        for (std::size_t j = 0; j < n; ++j)
            if (inst.matrix[j][i] != 0) d.transition(t).add_post(pn.share[i][j], abs_value(inst.matrix[j][i]));
        pn.spread.push_back(t);
    }
    pn.route.assign(n, std::vector<TransitionId>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool negative = inst.matrix[j][i] < 0;
            const TransitionId t = d.add_transition("t" + std::to_string(i + 1) + "." + std::to_string(j + 1),
                                                    std::string(negative ? "subtracts" : "adds") + " one unit from " +
                                                        std::to_string(i + 1) + " at " + std::to_string(j + 1));
            Transition& tr = d.transition(t);
            tr.add_pre(pn.share[i][j], Numeric{1});
            tr.add_pre(pn.fuel, Numeric{1});
            if (negative) {
                tr.add_pre(pn.next_value[j], Numeric{1});
                if (column[j] > 0) tr.add_pre(pn.fuel_next, Numeric{column[j]});
            } else {
                tr.add_post(pn.next_value[j], 1);
                if (column[j] > 0) tr.add_post(pn.fuel_next, column[j]);
            }
            pn.route[i][j] = t;
        }
    pn.restart = d.add_transition("tR", "starts the next round once the fuel is spent");
    Transition& tr = d.transition(pn.restart);
    tr.add_pre(pn.fuel, Inhibitor{});
    tr.add_pre(pn.fuel_next, Transfer{pn.fuel});
    for (std::size_t i = 0; i < n; ++i) tr.add_pre(pn.next_value[i], Transfer{pn.value[i]});

    pn.net = d.build();
    return pn;
}

std::vector<std::vector<Tokens>> matrix_iterates(const PositivityInstance& inst, std::size_t k)
{
    std::vector<std::vector<Tokens>> out{inst.v0};
    for (std::size_t step = 0; step < k; ++step) {
        const auto& v = out.back();
        std::vector<Tokens> w(inst.n);
        for (std::size_t r = 0; r < inst.n; ++r)
            for (std::size_t c = 0; c < inst.n; ++c) w[r] += inst.matrix[r][c] * v[c];
        out.push_back(std::move(w));
    }
    return out;
}

bool round_invariant_holds(const PositivityNet& pn, const PositivityInstance& inst, const Marking& m,
                           const std::vector<Tokens>& start)
{
    const std::size_t n = inst.n;
    for (std::size_t i = 0; i < n; ++i) {
        Tokens lhs = m[pn.next_value[i]];
        Tokens rhs = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const Tokens& a = inst.matrix[i][j];
            if (a < 0) lhs -= m[pn.share[j][i]];
            else lhs += m[pn.share[j][i]];
            lhs += a * m[pn.value[j]];
            rhs += a * start[j];
        }
        if (lhs != rhs) return false;
    }
    return true;
}

PhaseReport simulate_phases(const PositivityNet& pn, const PositivityInstance& inst, std::size_t rounds)
{
    const auto iterates = matrix_iterates(inst, rounds);
    for (const auto& v : iterates)
        for (const Tokens& x : v)
            if (x < 0) throw Error("an iterate within the requested rounds has a negative entry");

    const Net& net = pn.net;
    const std::size_t n = inst.n;
    Marking m = net.initial();
    PhaseReport report;
    auto values = [&] {
        std::vector<Tokens> v;
        for (PlaceId p : pn.value) v.push_back(m[p]);
        return v;
    };
    report.values.push_back(values());
    for (std::size_t round = 0; round < rounds; ++round) {
        const std::vector<Tokens> start = values();
        auto fire_all = [&](TransitionId t, PlaceId driver) {
            const Tokens count = m[driver];
            fire_batch(net, m, t, count);
            report.firings += static_cast<std::size_t>(count);
            if (!round_invariant_holds(pn, inst, m, start))
                throw Error("round invariant broken after '" + net.transitions()[t].name + "'");
        };
        for (std::size_t i = 0; i < n; ++i) fire_all(pn.spread[i], pn.value[i]);
        for (int pass = 0; pass < 2; ++pass) {
            const bool want_negative = pass == 1;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if ((inst.matrix[j][i] < 0) == want_negative) fire_all(pn.route[i][j], pn.share[i][j]);
        }
        if (!is_firable(net, m, pn.restart)) throw Error("restart is not enabled at the end of a round");
        m = fire(net, m, pn.restart);
        ++report.firings;
        report.values.push_back(values());
    }
    return report;
}

}  // namespace hipn
