#include "qlab/truth_table.hpp"

#include <bit>
#include <stdexcept>

namespace qlab {

namespace {

int symbol_width(std::uint32_t alphabet) {
    return alphabet <= 1 ? 0 : std::bit_width(alphabet - 1);
}

std::string pack_hex(const std::vector<std::uint32_t>& symbols, int width) {
    std::size_t total_bits = symbols.size() * static_cast<std::size_t>(width);
    std::vector<std::uint8_t> bytes((total_bits + 7) / 8, 0);
    std::size_t pos = 0;
    for (std::uint32_t s : symbols) {
        for (int b = 0; b < width; ++b, ++pos) {
            if ((s >> b) & 1u) bytes[pos >> 3] |= std::uint8_t(1u << (pos & 7));
        }
    }
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(bytes.size() * 2);
    for (std::uint8_t byte : bytes) {
        hex.push_back(digits[byte >> 4]);
        hex.push_back(digits[byte & 0xf]);
    }
    return hex;
}

std::vector<std::uint32_t> unpack_hex(const std::string& hex, std::size_t count, int width) {
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return std::uint8_t(c - '0');
        if (c >= 'a' && c <= 'f') return std::uint8_t(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return std::uint8_t(c - 'A' + 10);
        throw std::invalid_argument("TruthTable: bad hex digit in outputs");
    };
    std::size_t total_bits = count * static_cast<std::size_t>(width);
    std::size_t need = 2 * ((total_bits + 7) / 8);
    if (hex.size() != need)
        throw std::invalid_argument("TruthTable: outputs hex has wrong length");
    std::vector<std::uint8_t> bytes(need / 2, 0);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = std::uint8_t((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    std::vector<std::uint32_t> symbols(count, 0);
    std::size_t pos = 0;
    for (std::size_t j = 0; j < count; ++j) {
        std::uint32_t s = 0;
        for (int b = 0; b < width; ++b, ++pos) {
            if ((bytes[pos >> 3] >> (pos & 7)) & 1u) s |= 1u << b;
        }
        symbols[j] = s;
    }
    return symbols;
}

}  // namespace

TruthTable::TruthTable(int n, std::uint32_t alphabet_size, std::vector<std::uint32_t> outputs)
    : n_(n), alphabet_(alphabet_size), out_(std::move(outputs)) {
    if (n < 0 || n > kMaxArity)
        throw std::invalid_argument("TruthTable: arity must be in [0, " +
                                    std::to_string(kMaxArity) + "]");
    if (alphabet_ == 0) throw std::invalid_argument("TruthTable: alphabet must be positive");
    if (out_.size() != (1ull << n_))
        throw std::invalid_argument("TruthTable: outputs must have length 2^n");
    for (std::uint32_t s : out_)
        if (s >= alphabet_) throw std::invalid_argument("TruthTable: symbol out of alphabet");
}

TruthTable TruthTable::constant(int n, std::uint32_t alphabet_size, std::uint32_t value) {
    if (n < 0 || n > kMaxArity) throw std::invalid_argument("TruthTable: arity out of range");
    return TruthTable(n, alphabet_size,
                      std::vector<std::uint32_t>(std::size_t(1) << n, value));
}

TruthTable TruthTable::variable(int n, int i) {
    if (i < 1 || i > n) throw std::invalid_argument("TruthTable: variable index out of range");
    return from_eval(n, 2, [i](std::uint64_t x) { return std::uint32_t((x >> (i - 1)) & 1u); });
}

TruthTable TruthTable::from_eval(int n, std::uint32_t alphabet_size,
                                 const std::function<std::uint32_t(std::uint64_t)>& eval) {
    if (n < 0 || n > kMaxArity) throw std::invalid_argument("TruthTable: arity out of range");
    std::vector<std::uint32_t> out(std::size_t(1) << n);
    for (std::uint64_t x = 0; x < out.size(); ++x) out[x] = eval(x);
    return TruthTable(n, alphabet_size, std::move(out));
}

TruthTable TruthTable::restricted(int i, int bit) const {
    if (i < 1 || i > n_) throw std::invalid_argument("TruthTable: restricted index out of range");
    if (bit != 0 && bit != 1) throw std::invalid_argument("TruthTable: bit must be 0 or 1");
    const int p = i - 1;
    const std::uint64_t low_mask = (std::uint64_t(1) << p) - 1;
    std::vector<std::uint32_t> out(std::size_t(1) << (n_ - 1));
    for (std::uint64_t m = 0; m < out.size(); ++m) {
        std::uint64_t x = (m & low_mask) | (std::uint64_t(bit) << p) | ((m & ~low_mask) << 1);
        out[m] = out_[x];
    }
    return TruthTable(n_ - 1, alphabet_, std::move(out));
}

bool TruthTable::is_constant() const {
    for (std::uint32_t s : out_)
        if (s != out_[0]) return false;
    return true;
}

std::string TruthTable::canonical_key() const {
    int bytes_per = alphabet_ <= 0x100 ? 1 : alphabet_ <= 0x10000 ? 2 : 4;
    std::string key;
    key.reserve(2 + out_.size() * bytes_per);
    key.push_back(char(n_));
    key.push_back(char(bytes_per));
    for (std::uint32_t s : out_)
        for (int b = 0; b < bytes_per; ++b) key.push_back(char((s >> (8 * b)) & 0xff));
    return key;
}

nlohmann::json TruthTable::to_json() const {
    return {{"n", n_},
            {"alphabet", alphabet_},
            {"outputs", pack_hex(out_, symbol_width(alphabet_))}};
}

TruthTable TruthTable::from_json(const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    std::uint32_t alphabet = j.at("alphabet").get<std::uint32_t>();
    if (n < 0 || n > kMaxArity) throw std::invalid_argument("TruthTable: arity out of range");
    if (alphabet == 0) throw std::invalid_argument("TruthTable: alphabet must be positive");
    auto out = unpack_hex(j.at("outputs").get<std::string>(), std::size_t(1) << n,
                          symbol_width(alphabet));
    return TruthTable(n, alphabet, std::move(out));
}

Restriction Restriction::with(int i, int bit) const {
    Restriction r = *this;
    r.mask |= 1u << (i - 1);
    if (bit) r.bits |= 1u << (i - 1);
    else r.bits &= ~(1u << (i - 1));
    return r;
}

TruthTable Restriction::apply(const TruthTable& f) const {
    TruthTable g = f;
    // Fix from the highest index down so lower indices stay stable.
    for (int i = n; i >= 1; --i)
        if (fixes(i)) g = g.restricted(i, value_of(i));
    return g;
}

FunctionFamily::FunctionFamily(std::vector<TruthTable> members)
    : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("FunctionFamily: needs at least one member");
    if (members_.size() > 24) throw std::invalid_argument("FunctionFamily: too many members");
    n_ = members_[0].arity();
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const TruthTable& f = members_[i];
        if (f.arity() != n_)
            throw std::invalid_argument("FunctionFamily: members must share arity");
        if (f.alphabet_size() != 2)
            throw std::invalid_argument("FunctionFamily: members must be Boolean");
        if (f.is_constant())
            throw std::invalid_argument("FunctionFamily: member " + std::to_string(i + 1) +
                                        " is constant");
    }
}

TruthTable FunctionFamily::bundle(std::uint32_t select) const {
    if (select == 0) throw std::invalid_argument("FunctionFamily: empty bundle");
    if (select >> members_.size())
        throw std::invalid_argument("FunctionFamily: bundle selector out of range");
    std::vector<int> chosen;
    for (int i = 0; i < size(); ++i)
        if ((select >> i) & 1u) chosen.push_back(i);
    std::uint32_t alphabet = 1u << chosen.size();
    return TruthTable::from_eval(n_, alphabet, [&](std::uint64_t x) {
        std::uint32_t tuple = 0;
        for (std::size_t r = 0; r < chosen.size(); ++r)
            tuple |= members_[chosen[r]].value(x) << r;
        return tuple;
    });
}

nlohmann::json FunctionFamily::to_json() const {
    nlohmann::json ms = nlohmann::json::array();
    for (const TruthTable& f : members_) ms.push_back(f.to_json());
    return {{"n", n_}, {"members", ms}};
}

FunctionFamily FunctionFamily::from_json(const nlohmann::json& j) {
    std::vector<TruthTable> members;
    for (const auto& m : j.at("members")) members.push_back(TruthTable::from_json(m));
    FunctionFamily fam(std::move(members));
    if (j.contains("n") && j.at("n").get<int>() != fam.arity())
        throw std::invalid_argument("FunctionFamily: arity field disagrees with members");
    return fam;
}

}  // namespace qlab
