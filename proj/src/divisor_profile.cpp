#include "pgsnf/divisor_profile.hpp"

#include <json.hpp>

#include <stdexcept>

namespace pgsnf {

mpz_class DivisorProfile::total() const {
    mpz_class s = 0;
    for (const auto& [i, e] : mult) s += e;
    return s;
}

mpz_class DivisorProfile::weighted_sum() const {
    mpz_class s = 0;
    for (const auto& [i, e] : mult) s += i * e;
    return s;
}

mpz_class DivisorProfile::get(int i) const {
    const auto it = mult.find(i);
    return it == mult.end() ? mpz_class(0) : it->second;
}

void DivisorProfile::add(int i, const mpz_class& e) {
    if (e == 0) return;
    mpz_class& slot = mult[i];
    slot += e;
    if (slot == 0) mult.erase(i);
}

std::string DivisorProfile::to_json() const {
    nlohmann::ordered_json j;
    j["p"] = p;
    nlohmann::ordered_json mm = nlohmann::ordered_json::object();
    for (const auto& [i, e] : mult) {
        if (e == 0) continue;
        if (e.fits_ulong_p())
            mm[std::to_string(i)] = e.get_ui();
        else
            mm[std::to_string(i)] = e.get_str();
    }
    j["multiplicities"] = std::move(mm);
    return j.dump();
}

DivisorProfile DivisorProfile::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    DivisorProfile out;
    out.p = j.at("p").get<long>();
    for (const auto& [key, val] : j.at("multiplicities").items()) {
        const int i = std::stoi(key);
        mpz_class e;
        if (val.is_string()) {
            e = mpz_class(val.get<std::string>());
        } else if (val.is_number_integer()) {
            const long long raw = val.get<long long>();
            if (raw < 0) throw std::invalid_argument("negative multiplicity in profile");
            e = mpz_class(static_cast<unsigned long>(raw));
        } else {
            throw std::invalid_argument("profile multiplicities must be integers");
        }
        if (e < 0) throw std::invalid_argument("negative multiplicity in profile");
        out.add(i, e);
    }
    return out;
}

DivisorProfile profile_from_chain(const std::vector<mpz_class>& divisors, long p) {
    DivisorProfile out;
    out.p = p;
    const mpz_class p_z = p;
    mpz_class tmp;
    for (const mpz_class& d : divisors) {
        if (d == 0) throw std::invalid_argument("divisor chain entries must be nonzero");
        const long v = mpz_divisible_p(d.get_mpz_t(), p_z.get_mpz_t())
                           ? static_cast<long>(mpz_remove(tmp.get_mpz_t(), d.get_mpz_t(), p_z.get_mpz_t()))
                           : 0;
        out.add(static_cast<int>(v), 1);
    }
    return out;
}

}  // namespace pgsnf
