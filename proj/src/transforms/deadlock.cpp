#include "transforms/draft.hpp"

#include <set>

namespace hipn {

namespace {

// Conjoins `lit` into `clause`; false when the two constraints on a place contradict.
bool conjoin(DeadlockClause& clause, const DeadlockLiteral& lit)
{
    auto it = std::lower_bound(clause.begin(), clause.end(), lit.place,
                               [](const DeadlockLiteral& l, PlaceId p) { return l.place < p; });
    if (it == clause.end() || it->place != lit.place) {
        clause.insert(it, lit);
        return true;
    }
    if (it->exact && lit.exact) return *it->exact == *lit.exact;
    if (it->exact) return *it->exact != 0;  // exactly j >= 1 already implies at least one
    if (lit.exact) {
        if (*lit.exact == 0) return false;
        it->exact = lit.exact;
    }
    return true;
}

}  // namespace

std::vector<DeadlockClause> deadlock_clauses(const Net& net, std::size_t max_clauses)
{
    std::set<DeadlockClause> clauses{DeadlockClause{}};
    for (const Transition& t : net.transitions()) {
        // Ways for t to be disabled.
        std::vector<DeadlockLiteral> disabling;
        for (const PreArc& a : t.pre) {
            if (const auto* num = std::get_if<Numeric>(&a.kind)) {
                if (num->weight > Tokens(max_clauses))
                    throw Error("arc weight on transition '" + t.name + "' exceeds the clause cap");
                for (Tokens j = 0; j < num->weight; ++j) disabling.push_back({a.place, j});
            } else if (std::holds_alternative<Inhibitor>(a.kind)) {
                disabling.push_back({a.place, std::nullopt});
            }
        }
        std::set<DeadlockClause> next;
        for (const DeadlockClause& c : clauses) {
            for (const DeadlockLiteral& lit : disabling) {
                DeadlockClause extended = c;
                if (conjoin(extended, lit)) next.insert(std::move(extended));
                if (next.size() > max_clauses)
                    throw Error("deadlock condition needs more than " + std::to_string(max_clauses) + " clauses");
            }
        }
        clauses = std::move(next);
        if (clauses.empty()) break;
    }
    return {clauses.begin(), clauses.end()};
}

TransformResult dlf_to_reach(const Net& net, std::size_t max_clauses)
{
    if (classify(net).specials.transfer) throw Error("deadlock reduction does not accept transfer arcs");
    const auto clauses = deadlock_clauses(net, max_clauses);
    const std::size_t n = net.place_count();

    detail::NetDraft d(net);
    const PlaceId gate = d.add_place("dl.gate", 1, "held while the source net runs");
    const PlaceId done = d.add_place("dl.done", 0, "reached after a successful deadlock check");
    for (TransitionId u = 0; u < net.transition_count(); ++u) {
        d.transition(u).add_pre(gate, Numeric{1});
        d.transition(u).add_post(gate, 1);
    }

    for (std::size_t k = 0; k < clauses.size(); ++k) {
        const std::string c = "dl.c" + std::to_string(k);
        const std::string about = " (clause " + std::to_string(k) + ")";
        const PlaceId active = d.add_place(c, 0, "selected clause" + about);
        const TransitionId enter = d.add_transition(c + ".enter", "selects the clause" + about);
        d.transition(enter).add_pre(gate, Numeric{1});
        d.transition(enter).add_post(active, 1);
        const TransitionId check = d.add_transition(c + ".check", "confirms the clause" + about);
        d.transition(check).add_pre(active, Numeric{1});
        d.transition(check).add_post(done, 1);

        auto loop = [&](const std::string& name, std::string origin) {
            TransitionId u = d.add_transition(name, std::move(origin));
            d.transition(u).add_pre(active, Numeric{1});
            d.transition(u).add_post(active, 1);
            return u;
        };

        std::size_t next_lit = 0;
        for (PlaceId p = 0; p < n; ++p) {
            const std::string& pname = net.place_name(p);
            const DeadlockLiteral* lit = nullptr;
            if (next_lit < clauses[k].size() && clauses[k][next_lit].place == p) lit = &clauses[k][next_lit++];

            if (!lit) {
                TransitionId clear = loop(c + ".clear." + pname, "empties unconstrained " + pname + about);
                d.transition(clear).add_pre(p, Numeric{1});
            } else if (!lit->exact) {
                const PlaceId seen = d.add_place(c + "." + pname, 0, "witness that " + pname + " was non-empty" + about);
                TransitionId keep = loop(c + ".keep." + pname, "moves one token of " + pname + about);
                d.transition(keep).add_pre(p, Numeric{1});
                d.transition(keep).add_post(seen, 1);
                TransitionId drain = loop(c + ".drain." + pname, "empties " + pname + about);
                d.transition(drain).add_pre(p, Numeric{1});
                d.transition(check).add_pre(seen, Numeric{1});
            } else if (*lit->exact > 0) {
                const PlaceId seen =
                    d.add_place(c + "." + pname, 0, "witness that " + pname + " held " + lit->exact->str() + about);
                TransitionId take = loop(c + ".take." + pname, "removes " + lit->exact->str() + " from " + pname + about);
                d.transition(take).add_pre(p, Numeric{*lit->exact});
                d.transition(take).add_post(seen, 1);
                d.transition(check).add_pre(seen, Numeric{1});
            }
            d.transition(check).add_pre(p, Inhibitor{});
        }
    }

    TransformResult r;
    r.net = d.build();
    r.place_origin = d.place_origin();
    r.transition_origin = d.transition_origin();
    r.forward_map = detail::extend_map(n, r.net.place_count());
    r.forward_map.entries[gate].constant = 1;
    Marking target(r.net.place_count());
    target[done] = 1;
    r.query.text = "the source has a reachable deadlock iff this net reaches dl.done=1 with every other place empty";
    r.query.markings.push_back(std::move(target));
    return r;
}

TransformResult reach_to_dlf(const Net& net, const Marking& target)
{
    if (target.size() != net.place_count())
        throw Error("target marking has " + std::to_string(target.size()) + " entries for " +
                    std::to_string(net.place_count()) + " places");
    const std::size_t n = net.place_count();

    detail::NetDraft d(net);
    const PlaceId run = d.add_place("rd.run", 1, "held while the source net runs");
    const PlaceId alive = d.add_place("rd.alive", 1, "keeps the net live until the target is claimed");
    const PlaceId hit = d.add_place("rd.hit", 0, "marks that the target was claimed");
    for (TransitionId u = 0; u < net.transition_count(); ++u) {
        d.transition(u).add_pre(run, Numeric{1});
        d.transition(u).add_post(run, 1);
    }
    for (PlaceId p = 0; p < n; ++p) {
        TransitionId keep = d.add_transition("rd.keep." + net.place_name(p), "stays firable while " +
                                                                                 net.place_name(p) + " is non-empty");
        d.transition(keep).add_pre(p, Numeric{1});
        d.transition(keep).add_post(p, 1);
    }
    TransitionId idle = d.add_transition("rd.idle", "stays firable until the target is claimed");
    d.transition(idle).add_pre(alive, Numeric{1});
    d.transition(idle).add_post(alive, 1);
    TransitionId stop = d.add_transition("rd.stop", "claims the target marking");
    for (PlaceId p = 0; p < n; ++p)
        if (target[p] > 0) d.transition(stop).add_pre(p, Numeric{target[p]});
    d.transition(stop).add_pre(run, Numeric{1});
    d.transition(stop).add_pre(alive, Numeric{1});
    d.transition(stop).add_post(hit, 1);

    TransformResult r;
    r.net = d.build();
    r.place_origin = d.place_origin();
    r.transition_origin = d.transition_origin();
    r.forward_map = detail::extend_map(n, n + 3);
    r.forward_map.entries[run].constant = 1;
    r.forward_map.entries[alive].constant = 1;
    Marking dead(n + 3);
    dead[hit] = 1;
    r.query.text = "the target is reachable in the source iff this net has a reachable deadlock; the only "
                   "reachable deadlock is rd.hit=1 with every other place empty";
    r.query.markings.push_back(std::move(dead));
    return r;
}

}  // namespace hipn
