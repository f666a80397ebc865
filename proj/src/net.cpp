#include <hipn/net.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_set>

namespace hipn {

std::optional<Special> special_of(const ArcKind& kind)
{
    if (std::holds_alternative<Inhibitor>(kind)) return Special::Inhibitor;
    if (std::holds_alternative<Reset>(kind)) return Special::Reset;
    if (std::holds_alternative<Transfer>(kind)) return Special::Transfer;
    return std::nullopt;
}

const ArcKind* Transition::find_pre(PlaceId p) const
{
    auto it = std::lower_bound(pre.begin(), pre.end(), p,
                               [](const PreArc& a, PlaceId q) { return a.place < q; });
    if (it == pre.end() || it->place != p) return nullptr;
    return &it->kind;
}

Tokens Transition::post_weight(PlaceId p) const
{
    auto it = std::lower_bound(post.begin(), post.end(), p,
                               [](const PostArc& a, PlaceId q) { return a.place < q; });
    if (it == post.end() || it->place != p) return 0;
    return it->weight;
}

bool Transition::has_special() const
{
    return std::any_of(pre.begin(), pre.end(),
                       [](const PreArc& a) { return !std::holds_alternative<Numeric>(a.kind); });
}

void Transition::add_pre(PlaceId p, ArcKind kind)
{
    auto it = std::lower_bound(pre.begin(), pre.end(), p,
                               [](const PreArc& a, PlaceId q) { return a.place < q; });
    if (it != pre.end() && it->place == p)
        throw Error("transition '" + name + "' already has a pre-arc from place #" + std::to_string(p));
    pre.insert(it, PreArc{p, std::move(kind)});
}

void Transition::add_post(PlaceId p, Tokens weight)
{
    auto it = std::lower_bound(post.begin(), post.end(), p,
                               [](const PostArc& a, PlaceId q) { return a.place < q; });
    if (it != post.end() && it->place == p)
        throw Error("transition '" + name + "' already has a post-arc to place #" + std::to_string(p));
    post.insert(it, PostArc{p, std::move(weight)});
}

bool leq(const Marking& a, const Marking& b)
{
    if (a.size() != b.size()) throw Error("comparing markings of different length");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

std::size_t MarkingHash::operator()(const Marking& m) const
{
    std::size_t h = 0x9e3779b97f4a7c15ull ^ m.size();
    for (const Tokens& c : m.counts()) {
        const auto& backend = c.backend();
        for (std::size_t i = 0; i < backend.size(); ++i) {
            h ^= std::hash<std::uint64_t>{}(backend.limbs()[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        h = h * 1099511628211ull + 31;
    }
    return h;
}

Net::Net(std::vector<std::string> places, std::vector<Transition> transitions, Marking initial)
    : places_(std::move(places)), transitions_(std::move(transitions)), initial_(std::move(initial))
{
    for (Transition& t : transitions_) {
        std::stable_sort(t.pre.begin(), t.pre.end(),
                         [](const PreArc& a, const PreArc& b) { return a.place < b.place; });
        std::stable_sort(t.post.begin(), t.post.end(),
                         [](const PostArc& a, const PostArc& b) { return a.place < b.place; });
    }
}

const std::string& Net::place_name(PlaceId p) const
{
    if (p >= places_.size()) throw Error("unknown place #" + std::to_string(p));
    return places_[p];
}

const Transition& Net::transition(TransitionId t) const
{
    if (t >= transitions_.size()) throw Error("unknown transition #" + std::to_string(t));
    return transitions_[t];
}

std::optional<PlaceId> Net::find_place(std::string_view name) const
{
    for (std::size_t i = 0; i < places_.size(); ++i)
        if (places_[i] == name) return i;
    return std::nullopt;
}

std::optional<TransitionId> Net::find_transition(std::string_view name) const
{
    for (std::size_t i = 0; i < transitions_.size(); ++i)
        if (transitions_[i].name == name) return i;
    return std::nullopt;
}

PlaceId NetBuilder::add_place(std::string name, Tokens initial)
{
    if (initial < 0) throw Error("negative initial marking for place '" + name + "'");
    places_.push_back(std::move(name));
    initial_.push_back(std::move(initial));
    return places_.size() - 1;
}

TransitionId NetBuilder::add_transition(std::string name)
{
    transitions_.push_back(Transition{std::move(name), {}, {}});
    return transitions_.size() - 1;
}

NetBuilder& NetBuilder::input(TransitionId t, PlaceId p, Tokens weight)
{
    if (weight < 0) throw Error("negative arc weight");
    if (weight != 0) transitions_.at(t).add_pre(p, Numeric{std::move(weight)});
    return *this;
}

NetBuilder& NetBuilder::inhibitor(TransitionId t, PlaceId p)
{
    transitions_.at(t).add_pre(p, Inhibitor{});
    return *this;
}

NetBuilder& NetBuilder::reset(TransitionId t, PlaceId p)
{
    transitions_.at(t).add_pre(p, Reset{});
    return *this;
}

NetBuilder& NetBuilder::transfer(TransitionId t, PlaceId from, PlaceId to)
{
    transitions_.at(t).add_pre(from, Transfer{to});
    return *this;
}

NetBuilder& NetBuilder::output(TransitionId t, PlaceId p, Tokens weight)
{
    if (weight < 0) throw Error("negative arc weight");
    if (weight != 0) transitions_.at(t).add_post(p, std::move(weight));
    return *this;
}

Net NetBuilder::build() const
{
    return Net(places_, transitions_, Marking(initial_));
}

bool is_valid_name(std::string_view name)
{
    if (name.empty()) return false;
    for (unsigned char c : name) {
        if (c >= 0x80 || std::isalnum(c)) continue;
        switch (c) {
        case '_': case '.': case '\'': case '$': case '@': case '^': case '!': case '?':
        case '[': case ']': case '{': case '}': case '|': case '+': case '~': case '&': case '%':
            continue;
        default:
            return false;
        }
    }
    return true;
}

std::string_view code_name(DiagnosticCode code)
{
    switch (code) {
    case DiagnosticCode::DanglingPlace: return "dangling-place";
    case DiagnosticCode::DanglingTransferTarget: return "dangling-transfer-target";
    case DiagnosticCode::ZeroWeightArc: return "zero-weight-arc";
    case DiagnosticCode::SelfTransfer: return "self-transfer";
    case DiagnosticCode::MarkingLengthMismatch: return "marking-length-mismatch";
    case DiagnosticCode::DuplicateArc: return "duplicate-arc";
    case DiagnosticCode::DuplicateName: return "duplicate-name";
    case DiagnosticCode::InvalidName: return "invalid-name";
    }
    return "unknown";
}

std::vector<Diagnostic> validate(const Net& net)
{
    std::vector<Diagnostic> out;
    auto error = [&](DiagnosticCode code, std::string msg) {
        out.push_back({Severity::Error, code, std::move(msg)});
    };
    const std::size_t n = net.place_count();

    if (net.initial().size() != n)
        error(DiagnosticCode::MarkingLengthMismatch,
              "initial marking has " + std::to_string(net.initial().size()) + " entries for " +
                  std::to_string(n) + " places");
    for (std::size_t i = 0; i < net.initial().size(); ++i)
        if (net.initial()[i] < 0)
            error(DiagnosticCode::MarkingLengthMismatch, "negative initial count at place #" + std::to_string(i));

    std::set<std::string_view> seen;
    for (const std::string& name : net.places()) {
        if (!is_valid_name(name)) error(DiagnosticCode::InvalidName, "invalid place name '" + name + "'");
        if (!seen.insert(name).second) error(DiagnosticCode::DuplicateName, "duplicate place name '" + name + "'");
    }
    seen.clear();
    for (const Transition& t : net.transitions()) {
        if (!is_valid_name(t.name)) error(DiagnosticCode::InvalidName, "invalid transition name '" + t.name + "'");
        if (!seen.insert(t.name).second)
            error(DiagnosticCode::DuplicateName, "duplicate transition name '" + t.name + "'");
    }

    for (const Transition& t : net.transitions()) {
        const std::string where = "transition '" + t.name + "'";
        for (std::size_t i = 0; i < t.pre.size(); ++i) {
            const PreArc& a = t.pre[i];
            if (a.place >= n) {
                error(DiagnosticCode::DanglingPlace, where + ": pre-arc from unknown place #" + std::to_string(a.place));
                continue;
            }
            if (i > 0 && t.pre[i - 1].place == a.place)
                error(DiagnosticCode::DuplicateArc, where + ": two pre-arcs from '" + net.places()[a.place] + "'");
            if (const auto* num = std::get_if<Numeric>(&a.kind)) {
                if (num->weight <= 0)
                    error(DiagnosticCode::ZeroWeightArc,
                          where + ": non-positive pre-arc weight from '" + net.places()[a.place] + "'");
            } else if (const auto* tr = std::get_if<Transfer>(&a.kind)) {
                if (tr->target >= n)
                    error(DiagnosticCode::DanglingTransferTarget,
                          where + ": transfer from '" + net.places()[a.place] + "' to unknown place #" +
                              std::to_string(tr->target));
                else if (tr->target == a.place)
                    out.push_back({Severity::Warning, DiagnosticCode::SelfTransfer,
                                   where + ": self-transfer on '" + net.places()[a.place] + "' has no effect"});
            }
        }
        for (std::size_t i = 0; i < t.post.size(); ++i) {
            const PostArc& a = t.post[i];
            if (a.place >= n) {
                error(DiagnosticCode::DanglingPlace, where + ": post-arc to unknown place #" + std::to_string(a.place));
                continue;
            }
            if (i > 0 && t.post[i - 1].place == a.place)
                error(DiagnosticCode::DuplicateArc, where + ": two post-arcs to '" + net.places()[a.place] + "'");
            if (a.weight <= 0)
                error(DiagnosticCode::ZeroWeightArc,
                      where + ": non-positive post-arc weight to '" + net.places()[a.place] + "'");
        }
    }
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics)
{
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

bool SpecialSet::has(Special s) const
{
    switch (s) {
    case Special::Inhibitor: return inhibitor;
    case Special::Reset: return reset;
    case Special::Transfer: return transfer;
    }
    return false;
}

void SpecialSet::add(Special s)
{
    switch (s) {
    case Special::Inhibitor: inhibitor = true; break;
    case Special::Reset: reset = true; break;
    case Special::Transfer: transfer = true; break;
    }
}

std::string SpecialSet::letters() const
{
    std::string s;
    if (inhibitor) s += 'I';
    if (reset) s += 'R';
    if (transfer) s += 'T';
    return s;
}

namespace {

constexpr Special kAllSpecials[] = {Special::Inhibitor, Special::Reset, Special::Transfer};

// Arcs of the kinds in `counted` are treated as special, all others as numeric.
// Returns true when every counted arc has counted arcs from all lower places.
bool hierarchy_holds(const Net& net, const SpecialSet& counted, std::optional<Special> only_kind = std::nullopt)
{
    for (const Transition& t : net.transitions()) {
        // Lowest place without a counted arc to t.
        PlaceId first_gap = 0;
        for (const PreArc& a : t.pre) {
            auto s = special_of(a.kind);
            if (a.place == first_gap && s && counted.has(*s)) ++first_gap;
            else if (a.place > first_gap) break;
        }
        for (const PreArc& a : t.pre) {
            auto s = special_of(a.kind);
            if (!s || !counted.has(*s)) continue;
            if (only_kind && *s != *only_kind) continue;
            if (a.place > first_gap) return false;
        }
    }
    return true;
}

}  // namespace

NetClass classify(const Net& net)
{
    auto diags = validate(net);
    if (has_errors(diags)) throw Error("cannot classify an invalid net: " + diags.front().message);

    NetClass c;
    for (const Transition& t : net.transitions()) {
        for (const PreArc& a : t.pre) {
            if (auto s = special_of(a.kind)) c.specials.add(*s);
            if (const auto* tr = std::get_if<Transfer>(&a.kind)) {
                const ArcKind* at_target = t.find_pre(tr->target);
                if (at_target && !std::holds_alternative<Numeric>(*at_target)) c.constrained_transfer = false;
            }
        }
    }

    const SpecialSet all{true, true, true};
    for (Special s : kAllSpecials)
        if (hierarchy_holds(net, all, s)) c.hierarchical.add(s);
    c.fully_hierarchical = hierarchy_holds(net, all);
    c.ert_eligible = hierarchy_holds(net, SpecialSet{true, false, false});

    if (c.specials.empty()) {
        c.label = "PN";
    } else if (c.fully_hierarchical) {
        std::string letters = c.specials.letters();
        if (c.specials.transfer && c.constrained_transfer) letters.insert(letters.size() - 1, "c");
        c.label = "H{" + letters + "}";
    } else {
        // Largest sub-family of present kinds that is hierarchical on its own; the rest are unrestricted.
        SpecialSet best;
        int best_size = 0;
        for (int mask = 7; mask >= 1; --mask) {
            SpecialSet k{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
            if ((k.inhibitor && !c.specials.inhibitor) || (k.reset && !c.specials.reset) ||
                (k.transfer && !c.specials.transfer))
                continue;
            int size = int(k.inhibitor) + int(k.reset) + int(k.transfer);
            if (size > best_size && hierarchy_holds(net, k)) {
                best = k;
                best_size = size;
            }
        }
        SpecialSet rest{c.specials.inhibitor && !best.inhibitor, c.specials.reset && !best.reset,
                        c.specials.transfer && !best.transfer};
        c.label = best.empty() ? "{" + c.specials.letters() + "}" : rest.letters() + "-H{" + best.letters() + "}";
    }
    return c;
}

namespace detail {

bool firable_unchecked(const Transition& t, const Marking& m)
{
    for (const PreArc& a : t.pre) {
        if (const auto* num = std::get_if<Numeric>(&a.kind)) {
            if (m[a.place] < num->weight) return false;
        } else if (std::holds_alternative<Inhibitor>(a.kind)) {
            if (m[a.place] != 0) return false;
        }
    }
    return true;
}

Marking fire_unchecked(const Transition& t, const Marking& m)
{
    Marking out = m;
    bool special = false;
    for (const PreArc& a : t.pre) {
        if (const auto* num = std::get_if<Numeric>(&a.kind)) out[a.place] -= num->weight;
        else if (!std::holds_alternative<Inhibitor>(a.kind)) special = true;
    }
    if (special) {
        // Transfers read the counts left after the numeric phase, all at once.
        std::vector<std::pair<PlaceId, Tokens>> moves;
        for (const PreArc& a : t.pre)
            if (const auto* tr = std::get_if<Transfer>(&a.kind)) moves.emplace_back(tr->target, out[a.place]);
        for (const PreArc& a : t.pre)
            if (std::holds_alternative<Reset>(a.kind) || std::holds_alternative<Transfer>(a.kind)) out[a.place] = 0;
        for (auto& [target, amount] : moves) out[target] += amount;
    }
    for (const PostArc& a : t.post) out[a.place] += a.weight;
    return out;
}

}  // namespace detail

namespace {

void check_marking(const Net& net, const Marking& m)
{
    if (m.size() != net.place_count())
        throw Error("marking has " + std::to_string(m.size()) + " entries for " +
                    std::to_string(net.place_count()) + " places");
}

}  // namespace

bool is_firable(const Net& net, const Marking& m, TransitionId t)
{
    const Transition& tr = net.transition(t);
    check_marking(net, m);
    return detail::firable_unchecked(tr, m);
}

Marking fire(const Net& net, const Marking& m, TransitionId t)
{
    if (!is_firable(net, m, t)) throw Error("transition '" + net.transition(t).name + "' is not firable");
    return detail::fire_unchecked(net.transition(t), m);
}

std::vector<std::pair<TransitionId, Marking>> successors(const Net& net, const Marking& m)
{
    check_marking(net, m);
    std::vector<std::pair<TransitionId, Marking>> out;
    for (TransitionId t = 0; t < net.transition_count(); ++t) {
        const Transition& tr = net.transitions()[t];
        if (detail::firable_unchecked(tr, m)) out.emplace_back(t, detail::fire_unchecked(tr, m));
    }
    return out;
}

bool is_deadlocked(const Net& net, const Marking& m)
{
    check_marking(net, m);
    for (const Transition& t : net.transitions())
        if (detail::firable_unchecked(t, m)) return false;
    return true;
}

}  // namespace hipn
