#include "revpref/rational.hpp"

#include "revpref/errors.hpp"

#include <cctype>

namespace revpref {

std::string rat_to_string(const Rat& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

[[noreturn]] void bad(std::string_view text) {
    throw ValidationError("malformed rational literal '" + std::string(text) + "'");
}

} // namespace

Rat rat_from_string(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) bad(text);

    Rat value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad(text);
        BigInt d{std::string(den)};
        if (d == 0) bad(text);
        value = Rat(BigInt(std::string(num)), d);
    } else if (dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (whole.empty() && frac.empty()) bad(text);
        if (!whole.empty() && !all_digits(whole)) bad(text);
        if (!frac.empty() && !all_digits(frac)) bad(text);
        BigInt num = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
        BigInt den = 1;
        for (char c : frac) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        value = Rat(num, den);
    } else {
        if (!all_digits(s)) bad(text);
        value = Rat(BigInt(std::string(s)));
    }
    return negative ? -value : value;
}

double rat_to_double(const Rat& r) {
    return static_cast<double>(numerator(r)) / static_cast<double>(denominator(r));
}

} // namespace revpref
