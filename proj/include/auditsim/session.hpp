#pragma once

#include <map>
#include <set>
#include <string>

#include "auditsim/profiles.hpp"

namespace auditsim {

/// Browser-held state a search session accumulates: one opaque blob set per
/// data type (cookies, localStorage, history, ...). Visiting pages deposits
/// blobs; cleaning removes exactly the data types the browser profile names.
struct SessionState {
    std::map<std::string, std::set<std::string>> stored_data;
    std::string current_url;
    bool consent_accepted = false;

    bool empty_for(const std::string& data_type) const
    {
        auto it = stored_data.find(data_type);
        return it == stored_data.end() || it->second.empty();
    }

    void deposit(const std::string& data_type, std::string blob)
    {
        stored_data[data_type].insert(std::move(blob));
    }
};

/// Empties every data type on the browser's cleaning list; anything outside
/// the list survives. Idempotent.
inline SessionState clean_browser(SessionState session, const BrowserProfile& browser)
{
    for (const auto& data_type : browser.clean_data_types)
        session.stored_data.erase(data_type);
    session.consent_accepted = false;
    return session;
}

} // namespace auditsim
