#pragma once

#include <array>

namespace patricia::golden {

// Published sample values of C(p,u,v): p, u, v, C.
inline constexpr std::array<std::array<const char*, 4>, 17> c_table{{
    {"0.51", "1.00", "0.20", "17.6603002053593"},
    {"0.51", "1.00", "0.40", "17.6630153331822"},
    {"0.51", "1.00", "0.60", "17.6610407898646"},
    {"0.51", "1.00", "0.80", "17.6856832509155"},
    {"0.60", "0.90", "0.60", "1.49524800151569"},
    {"0.60", "1.00", "0.20", "1.08391296918222"},
    {"0.60", "1.00", "0.60", "1.08391297098683"},
    {"0.60", "1.00", "0.80", "1.08391297046200"},
    {"0.60", "1.10", "0.20", "0.834656789094941"},
    {"0.60", "1.20", "0.60", "0.673917281982084"},
    {"0.70", "1.00", "0.60", "0.232497954955319"},
    {"0.80", "1.00", "0.60", "0.0287161523336721"},
    {"0.85", "1.00", "0.60", "0.00237172764900606"},
    {"0.93", "1.00", "0.60", "1.87317294616045e15"},
    {"0.97", "0.50", "0.60", "9.17733198126610e72"},
    {"0.97", "1.00", "0.60", "6.05478107453485e72"},
    {"0.97", "5.00", "0.60", "2.30524156812013e72"},
}};

// Published h1 values: u~, h1(u~).
inline constexpr std::array<std::array<const char*, 2>, 21> h1_table{{
    {"-0.50", "1.37683018271327"},
    {"-0.45", "1.28574151187623"},
    {"-0.40", "1.20276152989834"},
    {"-0.35", "1.12708836544424"},
    {"-0.30", "1.05800806833013"},
    {"-0.25", "0.994884277261959"},
    {"-0.20", "0.937149181875062"},
    {"-0.15", "0.884295608451989"},
    {"-0.10", "0.835870082265572"},
    {"-0.05", "0.791466739676032"},
    {"0.00", "0.580594753668194"},
    {"0.05", "0.713309765274110"},
    {"0.10", "0.678937477362699"},
    {"0.15", "0.647342275661044"},
    {"0.20", "0.618287879529247"},
    {"0.25", "0.591561730562133"},
    {"0.30", "0.566972485392761"},
    {"0.35", "0.544347799045552"},
    {"0.40", "0.523532363681955"},
    {"0.45", "0.504386172111908"},
    {"0.50", "0.486782979369433"},
}};

// Published gradient rows at p = 0.70: p, u, v, C/|grad C|_1, dC/dp, dC/du, dC/dv.
inline constexpr std::array<std::array<const char*, 7>, 24> gradient_table_p070{{
    {"0.70", "0.7419408", "0.200", "0.0466821", "-7.02015816", "-0.941410951563526", "0.00277949304106073"},
    {"0.70", "0.7419408", "0.400", "0.0468213", "-7.00927750", "-0.941036859551048", "0.00326076664425301"},
    {"0.70", "0.7419408", "0.600", "0.0469950", "-6.99412985", "-0.941080960885188", "0.00352113957369227"},
    {"0.70", "0.8419408", "0.200", "0.0492989", "-5.33811883", "-0.631417261109490", "0.00300199019243053"},
    {"0.70", "0.8419408", "0.400", "0.0495040", "-5.32611794", "-0.631168855463216", "0.00332417515469530"},
    {"0.70", "0.8419408", "0.600", "0.0497253", "-5.31304507", "-0.631258543609903", "0.00339509555136175"},
    {"0.70", "0.9419408", "0.200", "0.0514611", "-4.23520180", "-0.447473694530132", "0.00317392708737430"},
    {"0.70", "0.9419408", "0.400", "0.0517361", "-4.22295039", "-0.447305509108986", "0.00334798714618501"},
    {"0.70", "0.9419408", "0.600", "0.0520044", "-4.21164153", "-0.447402921736284", "0.00328784937675408"},
    {"0.70", "1.0419408", "0.200", "0.0532287", "-3.47206308", "-0.330624920881206", "0.00330789550107013"},
    {"0.70", "1.0419408", "0.400", "0.0535756", "-3.45998730", "-0.330507053556417", "0.00335245633964476"},
    {"0.70", "1.0419408", "0.600", "0.0538907", "-3.45007283", "-0.330597031821256", "0.00320084691018963"},
    {"0.70", "1.1419408", "0.200", "0.0546466", "-2.92151577", "-0.252543040933695", "0.00341430828054712"},
    {"0.70", "1.1419408", "0.400", "0.0550660", "-2.90980583", "-0.252456509284293", "0.00334836078108580"},
    {"0.70", "1.1419408", "0.600", "0.0554287", "-2.90095183", "-0.252534083156064", "0.00313143305508135"},
    {"0.70", "1.2419408", "0.200", "0.0557535", "-2.51064207", "-0.198272264594124", "0.00350094009471391"},
    {"0.70", "1.2419408", "0.400", "0.0562453", "-2.49936355", "-0.198205173826516", "0.00334130490875495"},
    {"0.70", "1.2419408", "0.600", "0.0566567", "-2.49129520", "-0.198269800136153", "0.00307611303140831"},
    {"0.70", "1.3419408", "0.200", "0.0565844", "-2.19510393", "-0.159366055272336", "0.00357337397538515"},
    {"0.70", "1.3419408", "0.400", "0.0571484", "-2.18425793", "-0.159310991691086", "0.00333409085406799"},
    {"0.70", "1.3419408", "0.600", "0.0576098", "-2.17675830", "-0.159363902270115", "0.00303165893500434"},
    {"0.70", "1.4419408", "0.200", "0.0571731", "-1.94654812", "-0.130808089307877", "0.00363555773552626"},
    {"0.70", "1.4419408", "0.400", "0.0578086", "-1.93610396", "-0.130760449668088", "0.00332801239988356"},
    {"0.70", "1.4419408", "0.600", "0.0583219", "-1.92900552", "-0.130803443699534", "0.00299540897730211"},
}};

// h1 derivative table entry at u~ = 0 (disagrees with h1_table).
inline constexpr const char* h1_zero_derivative_table = "0.358367943474688";

} // namespace patricia::golden
