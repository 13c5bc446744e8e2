#ifndef QNG_FORMAT_HPP
#define QNG_FORMAT_HPP

#include <locale>
#include <sstream>
#include <string>

namespace qng {

/// Locale-independent %g-style number with the given significant digits.
inline std::string format_number(double v, int digits = 12)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(digits);
    os << v;
    return os.str();
}

} // namespace qng

#endif // QNG_FORMAT_HPP
