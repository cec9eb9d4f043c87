#pragma once

#include <optional>
#include <string>
#include <vector>

namespace finlog {

struct Symbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// An ordered list of relation symbols with unique names and finite arities.
/// The order is significant: enumeration, printing and structure files all
/// follow it.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<Symbol> symbols);

    static Vocabulary of(std::initializer_list<Symbol> symbols);

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }

    bool contains(const std::string& name) const;
    std::optional<int> arity_of(const std::string& name) const;
    std::optional<std::size_t> index_of(const std::string& name) const;

    /// True when every symbol of this vocabulary occurs in `other` with the
    /// same arity.
    bool subset_of(const Vocabulary& other) const;
    bool disjoint_from(const Vocabulary& other) const;

    /// Concatenation; throws VocabularyError on a name clash.
    Vocabulary extended_with(const Vocabulary& extra) const;

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
    friend auto operator<=>(const Vocabulary&, const Vocabulary&) = default;

private:
    std::vector<Symbol> symbols_;
};

}  // namespace finlog
