#include "finlog/structure.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <sstream>

namespace finlog {

std::uint64_t tuple_space_size(int domain_size, int arity) {
    std::uint64_t space = 1;
    for (int i = 0; i < arity; ++i) {
        if (domain_size != 0 && space > (std::uint64_t{1} << 62) / std::uint64_t(domain_size))
            throw BudgetError("tuple space n^arity does not fit in 63 bits",
                              UINT64_MAX, std::uint64_t{1} << 62);
        space *= std::uint64_t(domain_size);
    }
    return space;
}

std::uint64_t tuple_index(const Tuple& t, int domain_size) {
    std::uint64_t idx = 0;
    for (int a : t)
        idx = idx * std::uint64_t(domain_size) + std::uint64_t(a);
    return idx;
}

Tuple index_to_tuple(std::uint64_t index, int domain_size, int arity) {
    Tuple t(arity, 0);
    for (int i = arity - 1; i >= 0; --i) {
        t[i] = int(index % std::uint64_t(domain_size));
        index /= std::uint64_t(domain_size);
    }
    return t;
}

Interpretation::Interpretation(int domain_size, int arity)
    : domain_size_(domain_size), arity_(arity),
      space_(tuple_space_size(domain_size, arity)),
      words_((space_ + 63) / 64, 0) {
    if (arity < 0)
        throw DimensionError("negative arity");
    if (words_.empty())
        words_.push_back(0);  // arity > 0 over an empty domain
}

bool Interpretation::contains(const Tuple& t) const {
    if (int(t.size()) != arity_)
        throw DimensionError("tuple length does not match arity");
    for (int a : t)
        if (a < 0 || a >= domain_size_)
            throw DimensionError("tuple entry outside the domain");
    return space_ != 0 && test(tuple_index(t, domain_size_));
}

void Interpretation::set(std::uint64_t index, bool value) {
    auto& w = words_[index >> 6];
    std::uint64_t bit = std::uint64_t{1} << (index & 63);
    w = value ? (w | bit) : (w & ~bit);
}

void Interpretation::insert(const Tuple& t) {
    if (int(t.size()) != arity_)
        throw DimensionError("tuple length does not match arity");
    for (int a : t)
        if (a < 0 || a >= domain_size_)
            throw DimensionError("tuple entry outside the domain");
    set(tuple_index(t, domain_size_), true);
}

void Interpretation::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

void Interpretation::assign_mask(std::uint64_t mask) {
    words_[0] = space_ >= 64 ? mask : (mask & ((std::uint64_t{1} << space_) - 1));
}

std::uint64_t Interpretation::mask() const {
    return words_[0];
}

bool Interpretation::increment() {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t bits_here = std::min<std::uint64_t>(64, space_ - 64 * i);
        std::uint64_t limit = bits_here == 64 ? 0 : (std::uint64_t{1} << bits_here);
        ++words_[i];
        bool wrapped = (limit == 0) ? (words_[i] == 0) : (words_[i] == limit);
        if (!wrapped)
            return true;
        words_[i] = 0;
    }
    return false;
}

std::size_t Interpretation::count() const {
    std::size_t c = 0;
    for (auto w : words_)
        c += std::size_t(std::popcount(w));
    return c;
}

std::vector<Tuple> Interpretation::tuples() const {
    std::vector<Tuple> out;
    for (std::uint64_t i = 0; i < space_; ++i)
        if (test(i))
            out.push_back(index_to_tuple(i, domain_size_, arity_));
    return out;
}

Bijection::Bijection(std::vector<int> mapping) : map_(std::move(mapping)) {
    std::vector<bool> hit(map_.size(), false);
    for (int v : map_) {
        if (v < 0 || v >= int(map_.size()) || hit[v])
            throw DimensionError("mapping is not a permutation");
        hit[v] = true;
    }
}

Bijection Bijection::identity(int n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    return Bijection(std::move(m));
}

Bijection Bijection::inverse() const {
    std::vector<int> inv(map_.size());
    for (int i = 0; i < size(); ++i)
        inv[map_[i]] = i;
    return Bijection(std::move(inv));
}

Bijection Bijection::compose(const Bijection& inner) const {
    if (inner.size() != size())
        throw DimensionError("composing bijections of different sizes");
    std::vector<int> m(map_.size());
    for (int i = 0; i < size(); ++i)
        m[i] = map_[inner.map_[i]];
    return Bijection(std::move(m));
}

Tuple Bijection::image(const Tuple& t) const {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        out[i] = map_[t[i]];
    return out;
}

bool for_each_permutation(int n, const std::function<bool(const Bijection&)>& fn) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (!fn(Bijection(perm)))
            return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

Structure::Structure(Vocabulary vocabulary, int size)
    : voc_(std::move(vocabulary)), size_(size) {
    if (size < 0)
        throw DimensionError("negative structure size");
    interps_.reserve(voc_.size());
    for (const auto& sym : voc_.symbols())
        interps_.emplace_back(size, sym.arity);
}

const Interpretation& Structure::interpretation(std::size_t symbol_index) const {
    return interps_.at(symbol_index);
}

const Interpretation& Structure::interpretation(const std::string& symbol) const {
    auto i = voc_.index_of(symbol);
    if (!i)
        throw VocabularyError("no symbol '" + symbol + "' in vocabulary");
    return interps_[*i];
}

Interpretation& Structure::interpretation_mut(std::size_t symbol_index) {
    return interps_.at(symbol_index);
}

void Structure::set_interpretation(const std::string& symbol, const std::set<Tuple>& tuples) {
    auto i = voc_.index_of(symbol);
    if (!i)
        throw VocabularyError("no symbol '" + symbol + "' in vocabulary");
    interps_[*i].clear();
    for (const auto& t : tuples)
        interps_[*i].insert(t);
}

Structure apply_bijection(const Structure& s, const Bijection& pi) {
    if (pi.size() != s.size())
        throw DimensionError("bijection size " + std::to_string(pi.size()) +
                             " does not match structure size " + std::to_string(s.size()));
    Structure out(s.vocabulary(), s.size());
    for (std::size_t i = 0; i < s.vocabulary().size(); ++i) {
        const auto& in = s.interpretation(i);
        auto& dst = out.interpretation_mut(i);
        for (std::uint64_t idx = 0; idx < in.space(); ++idx)
            if (in.test(idx))
                dst.insert(pi.image(index_to_tuple(idx, s.size(), in.arity())));
    }
    return out;
}

namespace {

// Per-element signature: for each symbol and argument position, the number of
// tuples of the interpretation holding the element at that position. Invariant
// under isomorphism, so mismatched signatures prune the search.
std::vector<std::vector<int>> element_signatures(const Structure& s) {
    std::vector<std::vector<int>> sig(s.size());
    for (int e = 0; e < s.size(); ++e)
        sig[e] = {};
    for (std::size_t i = 0; i < s.vocabulary().size(); ++i) {
        const auto& in = s.interpretation(i);
        int arity = in.arity();
        std::vector<std::vector<int>> counts(s.size(), std::vector<int>(arity, 0));
        for (const auto& t : in.tuples())
            for (int p = 0; p < arity; ++p)
                ++counts[t[p]][p];
        for (int e = 0; e < s.size(); ++e)
            sig[e].insert(sig[e].end(), counts[e].begin(), counts[e].end());
    }
    return sig;
}

}  // namespace

std::optional<Bijection> is_isomorphic(const Structure& a, const Structure& b) {
    if (a.vocabulary() != b.vocabulary())
        throw VocabularyError("isomorphism check requires identical vocabularies");
    if (a.size() != b.size())
        return std::nullopt;
    for (std::size_t i = 0; i < a.vocabulary().size(); ++i)
        if (a.interpretation(i).count() != b.interpretation(i).count())
            return std::nullopt;

    auto sig_a = element_signatures(a);
    auto sig_b = element_signatures(b);
    {
        auto sorted_a = sig_a;
        auto sorted_b = sig_b;
        std::sort(sorted_a.begin(), sorted_a.end());
        std::sort(sorted_b.begin(), sorted_b.end());
        if (sorted_a != sorted_b)
            return std::nullopt;
    }

    // Backtracking over signature-respecting assignments; every isomorphism
    // respects the signatures, and each complete candidate is certified by a
    // full image comparison before it is returned.
    std::vector<int> map(a.size(), -1);
    std::vector<bool> used(a.size(), false);
    std::optional<Bijection> found;
    std::function<bool(int)> search = [&](int next) -> bool {
        if (next == a.size()) {
            Bijection pi{std::vector<int>(map)};
            if (apply_bijection(a, pi) == b) {
                found = pi;
                return true;
            }
            return false;
        }
        for (int cand = 0; cand < b.size(); ++cand) {
            if (used[cand] || sig_a[next] != sig_b[cand])
                continue;
            map[next] = cand;
            used[cand] = true;
            if (search(next + 1))
                return true;
            used[cand] = false;
        }
        return false;
    };
    search(0);
    return found;
}

Structure canonical_form(const Structure& s) {
    Structure best = s;
    for_each_permutation(s.size(), [&](const Bijection& pi) {
        Structure img = apply_bijection(s, pi);
        if (img < best)
            best = img;
        return true;
    });
    return best;
}

Structure reduct(const Structure& s, const Vocabulary& sub) {
    if (!sub.subset_of(s.vocabulary()))
        throw VocabularyError("reduct vocabulary is not a subset");
    Structure out(sub, s.size());
    for (std::size_t i = 0; i < sub.size(); ++i) {
        auto src = s.vocabulary().index_of(sub.symbols()[i].name);
        out.interpretation_mut(i) = s.interpretation(*src);
    }
    return out;
}

namespace {

std::uint64_t interpretation_space_bits(const Vocabulary& v, int size) {
    std::uint64_t bits = 0;
    for (const auto& sym : v.symbols())
        bits += tuple_space_size(size, sym.arity);
    return bits;
}

// 2^(sum of tuple spaces), saturating; throws BudgetError when over budget.
std::uint64_t count_against_budget(const Vocabulary& v, int size, std::uint64_t budget,
                                   const char* what) {
    std::uint64_t bits = interpretation_space_bits(v, size);
    std::uint64_t total = bits >= 63 ? UINT64_MAX : (std::uint64_t{1} << bits);
    if (total == UINT64_MAX)
        throw BudgetError(std::string(what) + " would enumerate 2^" + std::to_string(bits) +
                              " structures",
                          total, budget);
    if (total > budget)
        throw BudgetError(std::string(what) + " would enumerate " + std::to_string(total) +
                              " structures, budget is " + std::to_string(budget),
                          total, budget);
    return total;
}

}  // namespace

StructureEnumerator::StructureEnumerator(Vocabulary v, int size, std::uint64_t budget)
    : current_(std::move(v), size),
      total_(count_against_budget(current_.vocabulary(), size, budget,
                                  "structure enumeration")) {}

bool StructureEnumerator::next(Structure& out) {
    if (emitted_ >= total_)
        return false;
    if (emitted_ > 0) {
        // odometer: last symbol fastest
        for (std::size_t pos = current_.vocabulary().size(); pos-- > 0;)
            if (current_.interpretation_mut(pos).increment())
                break;
    }
    ++emitted_;
    out = current_;
    return true;
}

std::vector<Structure> all_structures(const Vocabulary& v, int size, std::uint64_t budget) {
    StructureEnumerator en(v, size, budget);
    std::vector<Structure> out;
    out.reserve(en.total());
    Structure s(v, size);
    while (en.next(s))
        out.push_back(s);
    return out;
}

ExpansionEnumerator::ExpansionEnumerator(const Structure& s, Vocabulary extra,
                                         std::uint64_t budget)
    : current_(s.vocabulary().extended_with(extra), s.size()),
      base_symbols_(s.vocabulary().size()),
      total_([&] {
          std::uint64_t bits = interpretation_space_bits(extra, s.size());
          return bits >= 63 ? UINT64_MAX : (std::uint64_t{1} << bits);
      }()),
      budget_(budget) {
    for (std::size_t i = 0; i < base_symbols_; ++i)
        current_.interpretation_mut(i) = s.interpretation(i);
    for (std::size_t i = 0; i < extra.size(); ++i) {
        const auto& in = current_.interpretation(base_symbols_ + i);
        state_.push_back(SymbolState{in.space() <= 64, in.space()});
    }
}

// Gosper's hack: next mask with the same popcount, ascending.
static std::uint64_t next_same_popcount(std::uint64_t x) {
    std::uint64_t c = x & (~x + 1);
    std::uint64_t r = x + c;
    return (((r ^ x) >> 2) / c) | r;
}

bool ExpansionEnumerator::advance(std::size_t pos) {
    auto& st = state_[pos];
    auto& in = current_.interpretation_mut(base_symbols_ + pos);
    if (!st.gosper)
        return in.increment();  // wide tuple space: plain ascending counter
    if (st.mask == 0) {
        if (st.space == 0)
            return false;
        st.popcount = 1;
        st.mask = 1;
        in.assign_mask(st.mask);
        return true;
    }
    std::uint64_t nxt = next_same_popcount(st.mask);
    bool overflow = st.space >= 64 ? (nxt < st.mask) : (nxt >= (std::uint64_t{1} << st.space));
    if (!overflow) {
        st.mask = nxt;
        in.assign_mask(st.mask);
        return true;
    }
    if (std::uint64_t(st.popcount) >= st.space)
        return false;
    ++st.popcount;
    st.mask = (st.popcount >= 64) ? ~std::uint64_t{0}
                                  : ((std::uint64_t{1} << st.popcount) - 1);
    in.assign_mask(st.mask);
    return true;
}

bool ExpansionEnumerator::next(Structure& out) {
    if (emitted_ >= total_)
        return false;
    if (emitted_ >= budget_)
        throw BudgetError("expansion search visited " + std::to_string(emitted_) +
                              " expansions, budget is " + std::to_string(budget_),
                          emitted_ + 1, budget_);
    if (emitted_ > 0) {
        for (std::size_t pos = state_.size(); pos-- > 0;) {
            if (advance(pos))
                break;
            // wrapped: reset this symbol to the empty interpretation
            state_[pos].mask = 0;
            state_[pos].popcount = 0;
            current_.interpretation_mut(base_symbols_ + pos).clear();
        }
    }
    ++emitted_;
    out = current_;
    return true;
}

std::vector<Structure> all_expansions(const Structure& s, const Vocabulary& extra,
                                      std::uint64_t budget) {
    ExpansionEnumerator en(s, extra, budget);
    std::vector<Structure> out;
    if (en.total() <= budget)
        out.reserve(en.total());
    Structure e(s.vocabulary(), 0);
    while (en.next(e))
        out.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// text format

namespace {

struct StructCursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1, col = 1;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            bump();
    }
    void bump() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            throw ParseError(line, col, what,
                             pos < text.size() ? std::string(1, text[pos]) : "end of input");
        bump();
    }
    std::string word() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            throw ParseError(line, col, "identifier", std::string(1, text[pos]));
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '$'))
            bump();
        if (start == pos)
            throw ParseError(line, col, "identifier",
                             pos < text.size() ? std::string(1, text[pos]) : "end of input");
        return text.substr(start, pos - start);
    }
    int integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            bump();
        if (start == pos)
            throw ParseError(line, col, "integer",
                             pos < text.size() ? std::string(1, text[pos]) : "end of input");
        return std::stoi(text.substr(start, pos - start));
    }
};

}  // namespace

Structure parse_structure(const std::string& text) {
    StructCursor c{text};
    auto head = c.word();
    if (head != "size")
        throw ParseError(c.line, c.col, "'size'", head);
    int n = c.integer();

    std::vector<Symbol> symbols;
    std::vector<std::set<Tuple>> interps;
    while (!c.eof()) {
        auto kw = c.word();
        if (kw != "rel")
            throw ParseError(c.line, c.col, "'rel'", kw);
        auto name = c.word();
        if (name[0] == '$')
            throw ParseError(c.line, c.col, "user symbol name (no '$' prefix)", name);
        c.expect('/', "'/'");
        int arity = c.integer();
        c.expect(':', "':'");
        std::set<Tuple> tuples;
        while (c.peek() == '(') {
            c.expect('(', "'('");
            Tuple t;
            if (c.peek() != ')') {
                t.push_back(c.integer());
                while (c.peek() == ',') {
                    c.expect(',', "','");
                    t.push_back(c.integer());
                }
            }
            c.expect(')', "')'");
            if (int(t.size()) != arity)
                throw ParseError(c.line, c.col,
                                 "tuple of arity " + std::to_string(arity),
                                 "tuple of length " + std::to_string(t.size()));
            tuples.insert(std::move(t));
            if (c.peek() == ';')
                c.expect(';', "';'");
            else
                break;
        }
        symbols.push_back({name, arity});
        interps.push_back(std::move(tuples));
    }

    Structure s(Vocabulary(std::move(symbols)), n);
    for (std::size_t i = 0; i < interps.size(); ++i)
        s.set_interpretation(s.vocabulary().symbols()[i].name, interps[i]);
    return s;
}

std::string format_structure(const Structure& s) {
    std::ostringstream out;
    out << "size " << s.size() << "\n";
    for (std::size_t i = 0; i < s.vocabulary().size(); ++i) {
        const auto& sym = s.vocabulary().symbols()[i];
        out << "rel " << sym.name << "/" << sym.arity << ":";
        bool first = true;
        for (const auto& t : s.interpretation(i).tuples()) {
            out << (first ? " (" : "; (");
            for (std::size_t k = 0; k < t.size(); ++k)
                out << (k ? "," : "") << t[k];
            out << ")";
            first = false;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace finlog
