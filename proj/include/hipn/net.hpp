#pragma once

#include <hipn/error.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace hipn {

using Tokens = boost::multiprecision::cpp_int;

// A place id is its position in the hierarchy; position 0 is the least place.
using PlaceId = std::size_t;
using TransitionId = std::size_t;

struct Numeric {
    Tokens weight;
    bool operator==(const Numeric&) const = default;
};
struct Inhibitor {
    bool operator==(const Inhibitor&) const = default;
};
struct Reset {
    bool operator==(const Reset&) const = default;
};
struct Transfer {
    PlaceId target;
    bool operator==(const Transfer&) const = default;
};

using ArcKind = std::variant<Numeric, Inhibitor, Reset, Transfer>;

enum class Special { Inhibitor, Reset, Transfer };

// The special kind of an arc, or nullopt for a numeric arc.
std::optional<Special> special_of(const ArcKind& kind);

struct PreArc {
    PlaceId place;
    ArcKind kind;
    bool operator==(const PreArc&) const = default;
};

struct PostArc {
    PlaceId place;
    Tokens weight;
    bool operator==(const PostArc&) const = default;
};

struct Transition {
    std::string name;
    std::vector<PreArc> pre;    // sorted by place
    std::vector<PostArc> post;  // sorted by place

    const ArcKind* find_pre(PlaceId p) const;
    Tokens post_weight(PlaceId p) const;
    bool has_special() const;

    // Both throw Error when an arc for the same place already exists.
    void add_pre(PlaceId p, ArcKind kind);
    void add_post(PlaceId p, Tokens weight);

    bool operator==(const Transition&) const = default;
};

class Marking {
public:
    Marking() = default;
    explicit Marking(std::size_t places) : counts_(places) {}
    explicit Marking(std::vector<Tokens> counts) : counts_(std::move(counts)) {}

    std::size_t size() const { return counts_.size(); }
    const Tokens& operator[](PlaceId p) const { return counts_[p]; }
    Tokens& operator[](PlaceId p) { return counts_[p]; }
    const std::vector<Tokens>& counts() const { return counts_; }

    bool operator==(const Marking&) const = default;

private:
    std::vector<Tokens> counts_;
};

// Component-wise order on markings of equal length.
bool leq(const Marking& a, const Marking& b);

struct MarkingHash {
    std::size_t operator()(const Marking& m) const;
};

class Net {
public:
    Net() = default;
    // Arcs are stored sorted by place; nothing else is checked here, see validate().
    Net(std::vector<std::string> places, std::vector<Transition> transitions, Marking initial);

    const std::vector<std::string>& places() const { return places_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    const Marking& initial() const { return initial_; }

    std::size_t place_count() const { return places_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }

    const std::string& place_name(PlaceId p) const;
    // Throws Error for an unknown id.
    const Transition& transition(TransitionId t) const;

    std::optional<PlaceId> find_place(std::string_view name) const;
    std::optional<TransitionId> find_transition(std::string_view name) const;

    bool operator==(const Net&) const = default;

private:
    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
    Marking initial_;
};

// Incremental construction with arc normalisation: zero weights are dropped.
class NetBuilder {
public:
    PlaceId add_place(std::string name, Tokens initial = 0);
    TransitionId add_transition(std::string name);

    NetBuilder& input(TransitionId t, PlaceId p, Tokens weight = 1);
    NetBuilder& inhibitor(TransitionId t, PlaceId p);
    NetBuilder& reset(TransitionId t, PlaceId p);
    NetBuilder& transfer(TransitionId t, PlaceId from, PlaceId to);
    NetBuilder& output(TransitionId t, PlaceId p, Tokens weight = 1);

    Net build() const;

private:
    std::vector<std::string> places_;
    std::vector<Tokens> initial_;
    std::vector<Transition> transitions_;
};

enum class Severity { Error, Warning };

enum class DiagnosticCode {
    DanglingPlace,
    DanglingTransferTarget,
    ZeroWeightArc,
    SelfTransfer,
    MarkingLengthMismatch,
    DuplicateArc,
    DuplicateName,
    InvalidName,
};

struct Diagnostic {
    Severity severity;
    DiagnosticCode code;
    std::string message;
};

std::vector<Diagnostic> validate(const Net& net);
bool has_errors(const std::vector<Diagnostic>& diagnostics);
std::string_view code_name(DiagnosticCode code);

// Names must survive the text format: non-empty, no whitespace or separators.
bool is_valid_name(std::string_view name);

struct SpecialSet {
    bool inhibitor = false;
    bool reset = false;
    bool transfer = false;

    bool has(Special s) const;
    void add(Special s);
    bool empty() const { return !inhibitor && !reset && !transfer; }
    // Letters in I, R, T order.
    std::string letters() const;
    bool operator==(const SpecialSet&) const = default;
};

struct NetClass {
    SpecialSet specials;
    // Kinds whose every arc has special arcs to the same transition from all lower places.
    SpecialSet hierarchical;
    bool fully_hierarchical = true;
    bool constrained_transfer = true;
    bool ert_eligible = true;
    // "PN", "H{IR}", "H{IRcT}", "R-H{I}", "{IT}" and so on.
    std::string label;
};

// Throws Error when validate() reports an error.
NetClass classify(const Net& net);

// Both throw Error for an unknown transition or a marking of the wrong length.
bool is_firable(const Net& net, const Marking& m, TransitionId t);
Marking fire(const Net& net, const Marking& m, TransitionId t);

std::vector<std::pair<TransitionId, Marking>> successors(const Net& net, const Marking& m);
bool is_deadlocked(const Net& net, const Marking& m);

namespace detail {
// No firability or shape checks.
bool firable_unchecked(const Transition& t, const Marking& m);
Marking fire_unchecked(const Transition& t, const Marking& m);
}  // namespace detail

}  // namespace hipn
