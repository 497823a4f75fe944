#include "nftscan/synth.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "nftscan/rng.hpp"

namespace nftscan {

namespace {

const char* kSyllables[] = {"ar", "bel", "cor", "dun", "el",  "far", "gor", "hal",
                            "ion", "jur", "kel", "lor", "mir", "nor", "oss", "pel",
                            "qua", "rin", "sol", "tar", "ul",  "ver", "wyn", "zor"};

std::string word(SplitMix64& rng, bool capitalize) {
    std::string w;
    int parts = 2 + static_cast<int>(rng.below(2));
    for (int i = 0; i < parts; ++i) w += kSyllables[rng.below(std::size(kSyllables))];
    if (capitalize) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
}

struct Ctx {
    SplitMix64& rng;
    std::string out;
    bool planted = false;

    void line(const std::string& s) { out += s + "\n"; }
    bool coin(double p) { return rng.coin(p); }
};

void emit_header(Ctx& c) {
    c.line("// SPDX-License-Identifier: MIT");
    c.line("pragma solidity ^0.8.17;");
    c.line("");
    if (c.coin(0.3)) c.line("// \xE5\x90\x88\xE7\xBA\xA6\xE5\xAE\x89\xE5\x85\xA8\xE5\xAE\xA1\xE8\xAE\xA1");
    if (c.coin(0.25)) c.line("/* audited build " + std::to_string(c.rng.below(10000)) + " */");
}

// Parameterless view getters are inert for every detector family.
void emit_decoys(Ctx& c, const std::string& backing_field) {
    int n = static_cast<int>(c.rng.below(3));
    for (int i = 0; i < n; ++i) {
        std::string name = word(c.rng, false) + "Info";
        c.line("    function " + name + "() public view returns (uint256) {");
        c.line("        return " + backing_field + ";");
        c.line("    }");
    }
    if (c.coin(0.4)) {
        // pattern words inside a string literal; the normalizer blanks them
        c.line("    string private memo = \"mint burn proxy require delegatecall\";");
    }
}

std::string contract_open(Ctx& c) {
    std::string name = word(c.rng, true) + (c.coin(0.5) ? "Token" : "Registry");
    return "contract " + name + " {";
}

// --- RMP: mutable proxy setter; planted setters carry no permission guard ---

void gen_rmp(Ctx& c) {
    emit_header(c);
    c.line(contract_open(c));
    c.line("    address public owner;");
    bool proxy_infra = c.planted || c.coin(0.6);
    bool with_transfer = c.planted ? c.coin(0.8) : c.coin(0.5);
    if (proxy_infra) c.line("    address public proxy;");
    c.line("    mapping(uint256 => address) private holders;");
    c.line("    event ProxyChanged(address p);");
    if (!c.planted) {
        c.line("    modifier onlyOwner() { require(msg.sender == owner, \"not owner\"); _; }");
    }
    c.line("    constructor() { owner = msg.sender; }");
    if (proxy_infra) {
        if (c.planted) {
            c.line("    function setProxy(address p) public {");
            if (c.coin(0.2)) c.line("        require(p != address(0), \"zero\");");
            c.line("        proxy = p;");
            if (c.coin(0.3)) c.line("        emit ProxyChanged(p);");
            c.line("    }");
        } else {
            c.line("    function setProxy(address p) public onlyOwner {");
            c.line("        require(p != address(0), \"zero\");");
            c.line("        proxy = p;");
            c.line("        emit ProxyChanged(p);");
            c.line("    }");
        }
    }
    if (proxy_infra && with_transfer) {
        c.line("    function transferFrom(address from, address to, uint256 id) public {");
        c.line(std::string("        ") +
               (c.planted ? "if (msg.sender != proxy) { return; }"
                          : "require(msg.sender == proxy, \"not proxy\");"));
        c.line("        holders[id] = to;");
        c.line("        from;");
        c.line("    }");
    }
    emit_decoys(c, "uint256(uint160(owner))");
    c.line("}");
}

// --- ERC721R: withdrawal that calls out before zeroing balances ------------

void gen_erc721r(Ctx& c) {
    emit_header(c);
    c.line(contract_open(c));
    c.line("    mapping(address => uint256) public balances;");
    c.line("    uint256 private pot;");
    bool has_call = c.planted || c.coin(0.75);
    if (!c.planted && has_call) {
        c.line("    bool private locked;");
        c.line("    modifier nonReentrant() {");
        c.line("        require(!locked, \"reentrant\");");
        c.line("        locked = true;");
        c.line("        _;");
        c.line("        locked = false;");
        c.line("    }");
    }
    c.line("    event Withdrawal(address to, uint256 amount);");
    c.line("    function deposit() public payable {");
    c.line("        balances[msg.sender] += msg.value;");
    c.line("    }");
    if (has_call) {
        if (c.planted) {
            bool checked = c.coin(0.4);
            int style = static_cast<int>(c.rng.below(3));
            c.line("    function withdraw(uint256 amount) public {");
            if (checked) c.line("        require(balances[msg.sender] >= amount, \"low\");");
            if (style == 0) {
                c.line("        msg.sender.call(abi.encodePacked(amount));");
            } else if (style == 1) {
                c.line("        (bool ok, ) = msg.sender.call(abi.encodePacked(amount));");
                c.line("        ok;");
            } else {
                c.line("        payable(msg.sender).transfer(amount);");
            }
            c.line("        balances[msg.sender] = 0;");
            if (c.coin(0.3)) c.line("        emit Withdrawal(msg.sender, amount);");
            c.line("    }");
        } else {
            c.line("    function withdraw(uint256 amount) public nonReentrant {");
            c.line("        require(balances[msg.sender] >= amount, \"low\");");
            c.line("        balances[msg.sender] -= amount;");
            c.line("        (bool ok, ) = msg.sender.call(abi.encodePacked(amount));");
            c.line("        require(ok, \"send failed\");");
            c.line("        emit Withdrawal(msg.sender, amount);");
            c.line("    }");
        }
    }
    emit_decoys(c, "pot");
    c.line("}");
}

// --- UM: open mint; planted mints carry no permission or supply checks ------

void gen_um(Ctx& c) {
    emit_header(c);
    c.line(contract_open(c));
    c.line("    address public owner;");
    c.line("    uint256 public totalSupply;");
    if (!c.planted) {
        c.line("    uint256 public maxSupply;");
        c.line("    bool public paused;");
    }
    c.line("    mapping(uint256 => address) public holders;");
    c.line("    event Minted(address to, uint256 id);");
    if (!c.planted) {
        c.line("    modifier onlyOwner() { require(msg.sender == owner, \"not owner\"); _; }");
        c.line("    modifier whenNotPaused() { require(!paused, \"paused\"); _; }");
        c.line("    constructor(uint256 limit) { owner = msg.sender; maxSupply = limit; }");
    } else {
        c.line("    constructor() { owner = msg.sender; }");
    }
    if (c.planted) {
        bool with_event = c.coin(0.5);
        c.line("    function mint(address to) public {");
        c.line("        totalSupply += 1;");
        c.line("        holders[totalSupply] = to;");
        if (with_event) c.line("        emit Minted(to, totalSupply);");
        c.line("    }");
        if (c.coin(0.4)) {
            c.line("    function mint(address to, uint256 n) public {");
            c.line("        for (uint256 i = 0; i < n; i++) {");
            c.line("            totalSupply += 1;");
            c.line("            holders[totalSupply] = to;");
            c.line("        }");
            c.line("    }");
        }
        if (c.coin(0.3)) {
            c.line("    function mint(address to, bool promo) public payable {");
            c.line("        totalSupply += 1;");
            c.line("        holders[totalSupply] = to;");
            c.line("        promo;");
            c.line("    }");
        }
        if (c.coin(0.25)) {
            c.line("    mapping(address => bool) public minters;");
            c.line("    function addMinter(address m) public {");
            c.line("        minters[m] = true;");
            c.line("    }");
        }
    } else {
        c.line("    function mint(address to) public onlyOwner whenNotPaused {");
        c.line("        require(totalSupply < maxSupply, \"cap reached\");");
        c.line("        totalSupply += 1;");
        c.line("        holders[totalSupply] = to;");
        c.line("        emit Minted(to, totalSupply);");
        c.line("    }");
        if (c.coin(0.2)) {
            c.line("    function mint(address to, uint256 n) public onlyOwner {");
            c.line("        require(totalSupply + n <= maxSupply, \"cap reached\");");
            c.line("        for (uint256 i = 0; i < n; i++) {");
            c.line("            totalSupply += 1;");
            c.line("            holders[totalSupply] = to;");
            c.line("            emit Minted(to, totalSupply);");
            c.line("        }");
            c.line("    }");
        }
        c.line("    function setPaused(bool v) public onlyOwner {");
        c.line("        require(msg.sender == owner, \"not owner\");");
        c.line("        paused = v;");
        c.line("    }");
    }
    emit_decoys(c, "totalSupply");
    c.line("}");
}

// --- MR: planted variants drop require/assert/revert entirely ---------------

void gen_mr(Ctx& c) {
    emit_header(c);
    c.line(contract_open(c));
    c.line("    address public owner;");
    c.line("    uint256 public value;");
    c.line("    mapping(uint256 => address) public holders;");
    c.line("    mapping(uint256 => string) private uris;");
    bool planted_events = c.planted && c.coin(0.4);
    bool with_events = !c.planted || planted_events;
    if (with_events) {
        c.line("    event ValueChanged(uint256 v);");
        c.line("    event Moved(address to, uint256 id);");
    }
    if (!c.planted)
        c.line("    modifier onlyOwner() { require(msg.sender == owner, \"not owner\"); _; }");
    c.line("    constructor() { owner = msg.sender; }");
    if (!c.planted || c.coin(0.3)) {
        c.line("    function initialize(address newOwner) public " +
               std::string(c.planted ? "{" : "onlyOwner {"));
        if (!c.planted) c.line("        require(newOwner != address(0), \"zero\");");
        c.line("        owner = newOwner;");
        if (with_events) c.line("        emit ValueChanged(0);");
        c.line("    }");
    }
    c.line("    function setValue(uint256 v) public " + std::string(c.planted ? "{" : "onlyOwner {"));
    if (!c.planted) c.line("        require(v > 0, \"zero\");");
    c.line("        value = v;");
    if (with_events) c.line("        emit ValueChanged(v);");
    c.line("    }");
    c.line("    function transfer(address to, uint256 id) public {");
    if (!c.planted) c.line("        require(holders[id] == msg.sender, \"not holder\");");
    c.line("        holders[id] = to;");
    if (with_events) c.line("        emit Moved(to, id);");
    c.line("    }");
    if (!c.planted || c.coin(0.6)) {
        c.line("    function tokenURI(uint256 id) public view returns (string memory) {");
        if (!c.planted) c.line("        require(holders[id] != address(0), \"no token\");");
        c.line("        return uris[id];");
        c.line("    }");
    }
    emit_decoys(c, "value");
    c.line("}");
}

// --- PB: burn without ownership verification ---------------------------------

void gen_pb(Ctx& c) {
    emit_header(c);
    c.line(contract_open(c));
    c.line("    address public owner;");
    c.line("    mapping(uint256 => address) private holders;");
    c.line("    mapping(address => uint256) private balanceTally;");
    if (!c.planted) c.line("    mapping(uint256 => uint256) public pending;");
    c.line("    event Burned(uint256 id);");
    bool guarded_variant = c.planted && c.coin(0.3);
    if (!c.planted || guarded_variant)
        c.line("    modifier onlyOwner() { require(msg.sender == owner, \"not owner\"); _; }");
    c.line("    constructor() { owner = msg.sender; }");
    c.line("    function ownerOf(uint256 id) public view returns (address) {");
    c.line("        return holders[id];");
    c.line("    }");
    bool exists_helper = !c.planted || c.coin(0.2);
    if (exists_helper) {
        c.line("    function _exists(uint256 id) internal view returns (bool) {");
        c.line("        return holders[id] != address(0);");
        c.line("    }");
    }
    if (!c.planted) {
        c.line("    function _isApprovedOrOwner(address who, uint256 id) internal view returns (bool) {");
        c.line("        return holders[id] == who;");
        c.line("    }");
        c.line("    function burn(uint256 id) public {");
        c.line("        require(_exists(id), \"no token\");");
        c.line("        require(_isApprovedOrOwner(msg.sender, id), \"not allowed\");");
        c.line("        balanceTally[holders[id]] -= 1;");
        c.line("        holders[id] = address(0);");
        c.line("        emit Burned(id);");
        c.line("    }");
    } else {
        bool with_event = c.coin(0.3);
        c.line("    function burn(uint256 id) public " +
               std::string(guarded_variant ? "onlyOwner {" : "{"));
        if (exists_helper) c.line("        if (_exists(id)) { balanceTally[holders[id]] -= 1; }");
        else c.line("        balanceTally[holders[id]] -= 1;");
        c.line("        holders[id] = address(0);");
        if (with_event) c.line("        emit Burned(id);");
        c.line("    }");
    }
    emit_decoys(c, "uint256(uint160(owner))");
    c.line("}");
}

std::string family_file_prefix(Family f) {
    std::string tag(family_tag(f));
    std::transform(tag.begin(), tag.end(), tag.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return tag;
}

}  // namespace

int designated_anchor_bit(Family family) {
    switch (family) {
    case Family::rmp: return 2;      // A3
    case Family::erc721r: return 2;  // B3
    case Family::um: return 0;       // C1
    case Family::mr: return 1;       // D2
    case Family::pb: return 3;       // E4
    }
    throw Error("unknown family");
}

std::vector<GeneratedContract> generate_family_corpus(Family family, int count,
                                                      std::uint64_t seed) {
    if (count < 1) throw Error("corpus size must be >= 1");
    std::vector<GeneratedContract> out;
    out.reserve(static_cast<std::size_t>(count));
    const std::uint64_t family_seed =
        derive_stream(seed, 0xC0 + static_cast<std::uint64_t>(family_code_prefix(family)));
    for (int i = 0; i < count; ++i) {
        SplitMix64 rng(derive_stream(family_seed, static_cast<std::uint64_t>(i)));
        Ctx ctx{rng, {}, i % 2 == 0};
        switch (family) {
        case Family::rmp: gen_rmp(ctx); break;
        case Family::erc721r: gen_erc721r(ctx); break;
        case Family::um: gen_um(ctx); break;
        case Family::mr: gen_mr(ctx); break;
        case Family::pb: gen_pb(ctx); break;
        }
        char num[8];
        std::snprintf(num, sizeof num, "%04d", i);
        GeneratedContract g;
        g.filename = family_file_prefix(family) + num + ".sol";
        g.text = std::move(ctx.out);
        g.label = ctx.planted ? 1 : 0;
        out.push_back(std::move(g));
    }
    return out;
}

void write_corpus(const std::vector<GeneratedContract>& contracts,
                  const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const GeneratedContract& g : contracts) {
        std::ofstream f(out_dir / g.filename, std::ios::binary);
        if (!f) throw Error("cannot write " + (out_dir / g.filename).string());
        f << g.text;
    }
    std::ofstream labels(out_dir / "labels.csv", std::ios::binary);
    if (!labels) throw Error("cannot write " + (out_dir / "labels.csv").string());
    labels << "File,Risk\n";
    for (const GeneratedContract& g : contracts)
        labels << g.filename << ',' << g.label << '\n';
}

}  // namespace nftscan
