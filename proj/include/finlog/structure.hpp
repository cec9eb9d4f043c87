#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finlog/errors.hpp"
#include "finlog/vocabulary.hpp"

namespace finlog {

using Tuple = std::vector<int>;

/// Number of tuples of the given arity over a domain of size n, i.e. n^arity.
/// Throws BudgetError when the count does not fit in 63 bits.
std::uint64_t tuple_space_size(int domain_size, int arity);

/// Position of a tuple in lexicographic order (first coordinate most
/// significant). The inverse of index_to_tuple.
std::uint64_t tuple_index(const Tuple& t, int domain_size);
Tuple index_to_tuple(std::uint64_t index, int domain_size, int arity);

/// Interpretation of one relation symbol: a set of arity-length tuples over
/// {0..n-1}, stored as a bitmask indexed by tuple_index.
class Interpretation {
public:
    Interpretation(int domain_size, int arity);

    int arity() const { return arity_; }
    int domain_size() const { return domain_size_; }
    std::uint64_t space() const { return space_; }

    bool test(std::uint64_t index) const {
        return (words_[index >> 6] >> (index & 63)) & 1;
    }
    bool contains(const Tuple& t) const;
    void set(std::uint64_t index, bool value);
    void insert(const Tuple& t);
    void clear();

    /// Overwrites the whole membership mask with the low `space()` bits of
    /// `mask`; only valid when space() <= 64.
    void assign_mask(std::uint64_t mask);
    std::uint64_t mask() const;  // valid when space() <= 64

    /// Treats the membership mask as a counter and adds one; returns false
    /// when it wraps back to the empty set. Works for any space().
    bool increment();

    std::size_t count() const;
    std::vector<Tuple> tuples() const;  // in lexicographic order

    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const Interpretation&, const Interpretation&) = default;
    friend auto operator<=>(const Interpretation&, const Interpretation&) = default;

private:
    int domain_size_;
    int arity_;
    std::uint64_t space_;
    std::vector<std::uint64_t> words_;
};

/// A permutation of {0..n-1}. Bijections between distinct equal-size domains
/// are represented on the canonical domain.
class Bijection {
public:
    explicit Bijection(std::vector<int> mapping);
    static Bijection identity(int n);

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_[i]; }
    const std::vector<int>& mapping() const { return map_; }

    Bijection inverse() const;
    /// (outer.compose(inner))(i) == outer(inner(i)).
    Bijection compose(const Bijection& inner) const;

    Tuple image(const Tuple& t) const;

    friend bool operator==(const Bijection&, const Bijection&) = default;

private:
    std::vector<int> map_;
};

/// Calls fn for every permutation of {0..n-1} in lexicographic order until fn
/// returns false. Returns false iff some call returned false.
bool for_each_permutation(int n, const std::function<bool(const Bijection&)>& fn);

/// A finite relational structure with domain {0..n-1}.
class Structure {
public:
    Structure(Vocabulary vocabulary, int size);

    const Vocabulary& vocabulary() const { return voc_; }
    int size() const { return size_; }

    const Interpretation& interpretation(std::size_t symbol_index) const;
    const Interpretation& interpretation(const std::string& symbol) const;
    Interpretation& interpretation_mut(std::size_t symbol_index);

    void set_interpretation(const std::string& symbol, const std::set<Tuple>& tuples);

    friend bool operator==(const Structure&, const Structure&) = default;
    friend auto operator<=>(const Structure&, const Structure&) = default;

private:
    Vocabulary voc_;
    int size_;
    std::vector<Interpretation> interps_;
};

/// Pointwise image of every tuple of every interpretation.
Structure apply_bijection(const Structure& s, const Bijection& pi);

/// Witnessing bijection when one exists; degree-signature pruning in front of
/// the permutation search, and the returned witness is re-verified.
std::optional<Bijection> is_isomorphic(const Structure& a, const Structure& b);

/// Smallest apply_bijection image under <=>, used to bucket isomorphism
/// classes.
Structure canonical_form(const Structure& s);

/// Same domain, interpretations restricted to sub (which must be a subset of
/// s's vocabulary, arities included).
Structure reduct(const Structure& s, const Vocabulary& sub);

/// Streams every structure of the given size over v exactly once.
/// Order: per-symbol membership bitmasks ascending as integers (bit i = i-th
/// tuple in lexicographic order), with the last symbol of the vocabulary
/// cycling fastest. Restartable by constructing a fresh enumerator.
class StructureEnumerator {
public:
    StructureEnumerator(Vocabulary v, int size, std::uint64_t budget = kDefaultBudget);

    std::uint64_t total() const { return total_; }
    bool next(Structure& out);

private:
    Structure current_;
    std::uint64_t total_;
    std::uint64_t emitted_ = 0;
};

std::vector<Structure> all_structures(const Vocabulary& v, int size,
                                      std::uint64_t budget = kDefaultBudget);

/// Streams every expansion of s by the extra symbols (which must be disjoint
/// from s's vocabulary). Order: per extra symbol, masks by ascending popcount
/// and then ascending value when the tuple space fits in 64 bits, plain
/// ascending value otherwise; later symbols cycle fastest. The sparse-first
/// order lets existential expansion searches reach small witnesses early.
/// The budget counts visits, so a search that stops early may run over a
/// space larger than the budget; exhausting past the budget throws.
class ExpansionEnumerator {
public:
    ExpansionEnumerator(const Structure& s, Vocabulary extra,
                        std::uint64_t budget = kDefaultBudget);

    std::uint64_t total() const { return total_; }  // saturates at UINT64_MAX
    bool next(Structure& out);

private:
    bool advance(std::size_t pos);

    Structure current_;
    std::size_t base_symbols_;
    std::uint64_t total_;
    std::uint64_t budget_;
    std::uint64_t emitted_ = 0;
    // per extra symbol: current popcount class and mask (64-bit mode), or a
    // plain counter (wide mode)
    struct SymbolState {
        bool gosper;
        std::uint64_t space;
        std::uint64_t mask = 0;
        int popcount = 0;
    };
    std::vector<SymbolState> state_;
};

std::vector<Structure> all_expansions(const Structure& s, const Vocabulary& extra,
                                      std::uint64_t budget = kDefaultBudget);

/// Text format:
///   size <n>
///   rel <name>/<arity>: (a1,...,ak); (b1,...,bk); ...
/// One `rel` clause per symbol, vocabulary order; no tuples after the colon
/// means the empty interpretation. Whitespace between tokens is free-form.
/// `$`-prefixed symbol names are reserved for machinery and rejected here.
Structure parse_structure(const std::string& text);
std::string format_structure(const Structure& s);

}  // namespace finlog
