#pragma once

#include <stdexcept>
#include <string>

namespace grm {

// A requested computation does not fit the configured op/memory limits.
// The message carries the offending size so callers can report it.
class BudgetError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class CacheError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace grm
