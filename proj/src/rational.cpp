#include "odrrsim/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace odrrsim {

namespace {

std::int64_t parse_int(const std::string& s) {
    if (s.empty())
        throw std::invalid_argument("Ratio::parse: empty number");
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("Ratio::parse: bad integer '" + s + "'");
    return v;
}

} // namespace

Ratio Ratio::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty())
        throw std::invalid_argument("Ratio::parse: empty string");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = parse_int(s.substr(0, slash));
        std::int64_t d = parse_int(s.substr(slash + 1));
        return Ratio(n, d);
    }

    auto dot = s.find('.');
    if (dot == std::string::npos)
        return Ratio(parse_int(s));

    // Decimal literal: sign, integer part, fractional digits. Exact.
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    std::string ipart = s.substr(i, dot - i);
    std::string fpart = s.substr(dot + 1);
    if (fpart.empty() && ipart.empty())
        throw std::invalid_argument("Ratio::parse: bad decimal '" + text + "'");
    for (char c : ipart + fpart)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("Ratio::parse: bad decimal '" + text + "'");
    if (fpart.size() > 18)
        throw std::invalid_argument("Ratio::parse: too many decimal digits '" + text + "'");

    std::int64_t ival = ipart.empty() ? 0 : parse_int(ipart);
    std::int64_t den = 1;
    for (std::size_t k = 0; k < fpart.size(); ++k) den *= 10;
    std::int64_t fval = fpart.empty() ? 0 : parse_int(fpart);
    Ratio r = Ratio(ival) + Ratio(fval, den);
    return neg ? -r : r;
}

} // namespace odrrsim
