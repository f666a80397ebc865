#include <hipn/ert.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace hipn {

std::size_t place_index(const Net& net, PlaceId p)
{
    if (p >= net.place_count()) throw Error("unknown place #" + std::to_string(p));
    return p + 1;
}

std::size_t transition_index(const Net& net, TransitionId t)
{
    std::size_t index = 0;
    for (const PreArc& a : net.transition(t).pre)
        if (std::holds_alternative<Inhibitor>(a.kind)) index = std::max(index, a.place + 1);
    return index;
}

bool compat(const Net& net, const Marking& m1, const Marking& m2, std::size_t level)
{
    const std::size_t upto = std::min(level, net.place_count());
    for (PlaceId p = 0; p < upto; ++p)
        if (m1[p] != m2[p]) return false;
    return true;
}

bool subsume(const Net& net, const Marking& earlier, const Marking& later, std::span<const TransitionId> rho)
{
    auto run = replay(net, earlier, rho);
    if (!run || run->last() != later) throw Error("the run does not lead between the two markings");
    std::size_t level = 0;
    for (TransitionId t : rho) level = std::max(level, transition_index(net, t));
    return leq(earlier, later) && compat(net, later, earlier, level);
}

namespace {

void check_eligible(const Net& net)
{
    for (const Transition& t : net.transitions())
        for (const PreArc& a : t.pre)
            if (std::holds_alternative<Transfer>(a.kind))
                throw Error("termination analysis does not support transfer arcs (transition '" + t.name + "')");
    if (!classify(net).ert_eligible)
        throw Error("termination analysis needs every transition's inhibitor places to be downward closed");
}

struct Frame {
    Marking marking;
    TransitionId via = 0;
    std::size_t node = 0;
    std::vector<TransitionId> order;
    std::size_t next = 0;
};

struct Subsumption {
    std::vector<TransitionId> path;  // root to leaf
    std::size_t ancestor_depth;
};

class ErtBuilder {
public:
    ErtBuilder(const Net& net, const ErtOptions& options, ErtTree* tree)
        : net_(net), options_(options), tree_(tree)
    {
        check_eligible(net);
        for (TransitionId t = 0; t < net.transition_count(); ++t) index_.push_back(transition_index(net, t));
        if (options.shuffle_seed) rng_.seed(*options.shuffle_seed);
    }

    // Depth-first construction; stops at the first subsumed leaf unless a tree is being recorded.
    std::optional<Subsumption> run()
    {
        std::optional<Subsumption> found;
        push(net_.initial(), 0, std::nullopt);
        while (!path_.empty()) {
            Frame& top = path_.back();
            const Transition* next = nullptr;
            TransitionId t = 0;
            while (top.next < top.order.size()) {
                t = top.order[top.next++];
                if (detail::firable_unchecked(net_.transitions()[t], top.marking)) {
                    next = &net_.transitions()[t];
                    break;
                }
            }
            if (!next) {
                path_.pop_back();
                continue;
            }
            Marking child = detail::fire_unchecked(*next, top.marking);
            if (++size_ > options_.max_nodes)
                throw BudgetExhausted("termination tree exceeds " + std::to_string(options_.max_nodes) + " nodes");
            depth_ = std::max(depth_, path_.size());

            if (auto ancestor = subsuming_ancestor(child, t)) {
                if (tree_) record(child, t, ErtStatus::SubsumedLeaf, path_[*ancestor].node);
                if (!found) {
                    Subsumption s;
                    for (std::size_t d = 1; d < path_.size(); ++d) s.path.push_back(path_[d].via);
                    s.path.push_back(t);
                    s.ancestor_depth = *ancestor;
                    found = std::move(s);
                }
                if (!tree_) return found;
                continue;
            }
            push(std::move(child), t, path_.back().node);
        }
        return found;
    }

    std::size_t size() const { return size_; }
    std::size_t depth() const { return depth_; }

private:
    // Nearest ancestor whose marking subsumes `child`, scanning towards the root.
    std::optional<std::size_t> subsuming_ancestor(const Marking& child, TransitionId via) const
    {
        std::size_t level = index_[via];
        for (std::size_t a = path_.size(); a-- > 0;) {
            if (leq(path_[a].marking, child) && compat(net_, child, path_[a].marking, level)) return a;
            if (a > 0) level = std::max(level, index_[path_[a].via]);
        }
        return std::nullopt;
    }

    void push(Marking m, TransitionId via, std::optional<std::size_t> parent)
    {
        Frame f;
        f.order.resize(net_.transition_count());
        std::iota(f.order.begin(), f.order.end(), TransitionId{0});
        if (options_.shuffle_seed) std::shuffle(f.order.begin(), f.order.end(), rng_);
        f.via = via;
        if (tree_) {
            bool dead = is_deadlocked(net_, m);
            f.node = record(m, via, dead ? ErtStatus::DeadlockLeaf : ErtStatus::Interior, std::nullopt, parent);
        }
        f.marking = std::move(m);
        path_.push_back(std::move(f));
    }

    std::size_t record(const Marking& m, TransitionId via, ErtStatus status, std::optional<std::size_t> subsumed_by,
                       std::optional<std::size_t> parent = std::nullopt)
    {
        ErtNode node;
        node.marking = m;
        node.status = status;
        node.subsumed_by = subsumed_by;
        if (tree_->nodes.empty()) {
            node.depth = 0;
        } else {
            node.parent = parent ? *parent : path_.back().node;
            node.via = via;
            node.depth = tree_->nodes[*node.parent].depth + 1;
        }
        tree_->nodes.push_back(std::move(node));
        return tree_->nodes.size() - 1;
    }

    const Net& net_;
    const ErtOptions& options_;
    ErtTree* tree_;
    std::vector<std::size_t> index_;
    std::vector<Frame> path_;
    std::mt19937_64 rng_;
    std::size_t size_ = 1;
    std::size_t depth_ = 0;
};

}  // namespace

TermVerdict decide_termination(const Net& net, const ErtOptions& options)
{
    ErtBuilder builder(net, options, nullptr);
    auto found = builder.run();
    if (!found) return Terminating{builder.size(), builder.depth()};

    std::span<const TransitionId> all(found->path);
    auto stem = replay(net, net.initial(), all.first(found->ancestor_depth));
    if (!stem) throw Error("internal error: stem does not replay");
    auto pump = replay(net, stem->last(), all.subspan(found->ancestor_depth));
    if (!pump) throw Error("internal error: pump does not replay");
    return NonTerminating{std::move(*stem), std::move(*pump)};
}

ErtTree build_ert(const Net& net, const ErtOptions& options)
{
    ErtTree tree;
    ErtBuilder builder(net, options, &tree);
    builder.run();
    return tree;
}

bool verify_pump(const Net& net, const TermVerdict& verdict)
{
    const auto* v = std::get_if<NonTerminating>(&verdict);
    if (!v || v->pump.transitions.empty()) return false;
    if (v->stem.markings.empty() || v->pump.markings.empty()) return false;
    if (net.initial().size() != net.place_count()) return false;

    auto stem = replay(net, net.initial(), v->stem.transitions);
    if (!stem || *stem != v->stem) return false;

    std::size_t level = 0;
    for (TransitionId t : v->pump.transitions) {
        if (t >= net.transition_count()) return false;
        level = std::max(level, transition_index(net, t));
    }

    Marking from = stem->last();
    for (int round = 0; round < 3; ++round) {
        auto pump = replay(net, from, v->pump.transitions);
        if (!pump) return false;
        if (round == 0 && *pump != v->pump) return false;
        if (!leq(from, pump->last()) || !compat(net, from, pump->last(), level)) return false;
        from = pump->last();
    }
    return true;
}

namespace {

std::string names(const Net& net, const std::vector<TransitionId>& ts)
{
    std::string out;
    for (TransitionId t : ts) {
        if (!out.empty()) out += ' ';
        out += net.transition(t).name;
    }
    return out;
}

std::string marking_tuple(const Marking& m)
{
    std::string out = "(";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ',';
        out += m[i].str();
    }
    return out + ")";
}

}  // namespace

std::string verdict_to_text(const Net& net, const TermVerdict& verdict)
{
    std::ostringstream out;
    if (const auto* t = std::get_if<Terminating>(&verdict)) {
        out << "TERMINATING\n" << "tree-size: " << t->tree_size << "\n" << "longest-run: " << t->depth << "\n";
    } else {
        const auto& n = std::get<NonTerminating>(verdict);
        out << "NON-TERMINATING\n"
            << "stem: " << names(net, n.stem.transitions) << "\n"
            << "pump: " << names(net, n.pump.transitions) << "\n";
    }
    return out.str();
}

std::string ert_to_dot(const Net& net, const ErtTree& tree)
{
    std::ostringstream out;
    out << "digraph ert {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const ErtNode& n = tree.nodes[i];
        out << "  n" << i << " [label=\"" << marking_tuple(n.marking) << "\"";
        if (n.status == ErtStatus::SubsumedLeaf) out << ", style=filled, fillcolor=\"#f4b183\"";
        else if (n.status == ErtStatus::DeadlockLeaf) out << ", peripheries=2";
        out << "];\n";
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const ErtNode& n = tree.nodes[i];
        if (n.parent)
            out << "  n" << *n.parent << " -> n" << i << " [label=\"" << net.transition(*n.via).name << "\"];\n";
        if (n.subsumed_by) out << "  n" << i << " -> n" << *n.subsumed_by << " [style=dashed, constraint=false];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace hipn
