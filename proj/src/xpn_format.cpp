#include <hipn/xpn_format.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace hipn {

namespace {

bool is_name_char(char c)
{
    return is_valid_name(std::string_view(&c, 1));
}

// Cursor over one line; columns are 1-based byte offsets.
class LineCursor {
public:
    LineCursor(std::string_view line, std::size_t line_no, const std::string& file)
        : line_(line), line_no_(line_no), file_(file) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file_, line_no_, pos_ + 1, msg); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const
    {
        throw ParseError(file_, line_no_, pos + 1, msg);
    }

    void skip_space()
    {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
    }
    bool at_end()
    {
        skip_space();
        return pos_ >= line_.size();
    }
    std::size_t pos() const { return pos_; }
    void rewind(std::size_t pos) { pos_ = pos; }
    char peek()
    {
        skip_space();
        return pos_ < line_.size() ? line_[pos_] : '\0';
    }
    bool accept(std::string_view s)
    {
        skip_space();
        if (line_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view s)
    {
        if (!accept(s)) fail("expected '" + std::string(s) + "'");
    }
    std::string name(const char* what)
    {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < line_.size() && is_name_char(line_[pos_])) ++pos_;
        if (start == pos_) fail(std::string("expected ") + what);
        return std::string(line_.substr(start, pos_ - start));
    }
    // A keyword must be followed by whitespace.
    bool accept_keyword(std::string_view kw)
    {
        skip_space();
        if (line_.substr(pos_, kw.size()) != kw) return false;
        std::size_t after = pos_ + kw.size();
        if (after < line_.size() && line_[after] != ' ' && line_[after] != '\t') return false;
        pos_ = after;
        return true;
    }
    Tokens number()
    {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] >= '0' && line_[pos_] <= '9') ++pos_;
        if (start == pos_) fail("expected a non-negative integer");
        return Tokens(std::string(line_.substr(start, pos_ - start)));
    }

private:
    std::string_view line_;
    std::size_t line_no_;
    const std::string& file_;
    std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line)
{
    auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

class XpnParser {
public:
    explicit XpnParser(const std::string& file) : file_(file) {}

    Net parse(std::string_view text)
    {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            ++line_no;
            parse_line(strip_comment(text.substr(start, end - start)), line_no);
            start = end + 1;
        }
        return Net(places_, transitions_, Marking(marking_));
    }

private:
    void parse_line(std::string_view line, std::size_t line_no)
    {
        LineCursor c(line, line_no, file_);
        if (c.at_end()) return;
        if (c.accept("places:")) {
            while (!c.at_end()) {
                c.skip_space();
                std::size_t at = c.pos();
                std::string n = c.name("a place name");
                if (place_index_.count(n)) c.fail_at(at, "duplicate place '" + n + "'");
                place_index_[n] = places_.size();
                places_.push_back(n);
                marking_.push_back(0);
            }
        } else if (c.accept("marking:")) {
            while (!c.at_end()) {
                PlaceId p = place(c);
                if (assigned_.count(p)) c.fail("place '" + places_[p] + "' assigned twice");
                assigned_.insert({p, true});
                c.expect("=");
                marking_[p] = c.number();
            }
        } else if (c.accept_keyword("trans")) {
            parse_transition(c);
        } else {
            c.fail("expected 'places:', 'marking:' or 'trans'");
        }
    }

    PlaceId place(LineCursor& c)
    {
        c.skip_space();
        std::size_t at = c.pos();
        std::string n = c.name("a place name");
        auto it = place_index_.find(n);
        if (it == place_index_.end()) c.fail_at(at, "unknown place '" + n + "'");
        return it->second;
    }

    Tokens weight(LineCursor& c)
    {
        if (!c.accept("*")) return 1;
        return c.number();
    }

    void parse_transition(LineCursor& c)
    {
        c.skip_space();
        std::size_t at = c.pos();
        Transition t{c.name("a transition name"), {}, {}};
        for (const Transition& other : transitions_)
            if (other.name == t.name) c.fail_at(at, "duplicate transition '" + t.name + "'");
        c.expect(":");

        std::map<PlaceId, bool> seen_pre;
        auto add_pre = [&](LineCursor& cur, std::size_t where, PlaceId p, ArcKind kind) {
            if (seen_pre.count(p)) cur.fail_at(where, "second pre-arc from place '" + places_[p] + "'");
            seen_pre[p] = true;
            if (const auto* num = std::get_if<Numeric>(&kind); num && num->weight == 0) return;
            t.pre.push_back({p, std::move(kind)});
        };

        bool first = true;
        while (!c.at_end() && c.peek() != ';') {
            if (!first) c.expect(",");
            first = false;
            c.skip_space();
            std::size_t item = c.pos();
            if (c.accept_keyword("inh")) {
                add_pre(c, item, place(c), Inhibitor{});
            } else if (c.accept_keyword("in")) {
                PlaceId p = place(c);
                add_pre(c, item, p, Numeric{weight(c)});
            } else if (c.accept_keyword("reset")) {
                add_pre(c, item, place(c), Reset{});
            } else if (c.accept_keyword("xfer")) {
                PlaceId p = place(c);
                c.expect("->");
                add_pre(c, item, p, Transfer{place(c)});
            } else {
                c.fail("expected 'in', 'inh', 'reset' or 'xfer'");
            }
        }
        if (c.accept(";")) {
            std::map<PlaceId, bool> seen_post;
            first = true;
            while (!c.at_end()) {
                if (!first) c.expect(",");
                c.skip_space();
                std::size_t item = c.pos();
                if (c.accept_keyword("out")) {
                    // A later item may be a place that happens to be called "out".
                    if (!first && (c.at_end() || c.peek() == ',')) c.rewind(item);
                } else if (first) {
                    c.fail("expected 'out'");
                }
                first = false;
                PlaceId p = place(c);
                Tokens w = weight(c);
                if (seen_post.count(p)) c.fail_at(item, "second post-arc to place '" + places_[p] + "'");
                seen_post[p] = true;
                if (w != 0) t.post.push_back({p, std::move(w)});
            }
        }
        transitions_.push_back(std::move(t));
    }

    const std::string& file_;
    std::vector<std::string> places_;
    std::map<std::string, PlaceId> place_index_;
    std::vector<Tokens> marking_;
    std::map<PlaceId, bool> assigned_;
    std::vector<Transition> transitions_;
};

}  // namespace

Net parse_xpn(std::string_view text, const std::string& file)
{
    return XpnParser(file).parse(text);
}

std::string render_marking(const Net& net, const Marking& m)
{
    std::string out;
    for (PlaceId p = 0; p < m.size() && p < net.place_count(); ++p) {
        if (m[p] == 0) continue;
        if (!out.empty()) out += ' ';
        out += net.places()[p] + "=" + m[p].str();
    }
    return out;
}

namespace {

std::string weight_suffix(const Tokens& w)
{
    return w == 1 ? std::string() : "*" + w.str();
}

}  // namespace

std::string render_xpn(const Net& net)
{
    std::ostringstream out;
    out << "places:";
    for (const auto& p : net.places()) out << ' ' << p;
    out << "\nmarking:";
    std::string marking = render_marking(net, net.initial());
    if (!marking.empty()) out << ' ' << marking;
    out << '\n';
    for (const Transition& t : net.transitions()) {
        out << "trans " << t.name << ':';
        bool first = true;
        for (const PreArc& a : t.pre) {
            out << (first ? " " : ", ");
            first = false;
            const std::string& p = net.place_name(a.place);
            std::visit(
                [&](const auto& k) {
                    using K = std::decay_t<decltype(k)>;
                    if constexpr (std::is_same_v<K, Numeric>) out << "in " << p << weight_suffix(k.weight);
                    else if constexpr (std::is_same_v<K, Inhibitor>) out << "inh " << p;
                    else if constexpr (std::is_same_v<K, Reset>) out << "reset " << p;
                    else out << "xfer " << p << "->" << net.place_name(k.target);
                },
                a.kind);
        }
        if (!t.post.empty()) {
            out << " ; out ";
            first = true;
            for (const PostArc& a : t.post) {
                if (!first) out << ", ";
                first = false;
                out << net.place_name(a.place) << weight_suffix(a.weight);
            }
        }
        out << '\n';
    }
    return out.str();
}

Marking parse_marking(const Net& net, std::string_view text, const std::string& file)
{
    Marking m(net.place_count());
    std::vector<bool> assigned(net.place_count(), false);
    LineCursor c(strip_comment(text), 1, file);
    while (!c.at_end()) {
        c.skip_space();
        std::size_t at = c.pos();
        std::string n = c.name("a place name");
        auto p = net.find_place(n);
        if (!p) c.fail_at(at, "unknown place '" + n + "'");
        if (assigned[*p]) c.fail_at(at, "place '" + n + "' assigned twice");
        assigned[*p] = true;
        c.expect("=");
        m[*p] = c.number();
    }
    return m;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hipn
