#include "kong/reduction.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace kong {

namespace {

struct WorkPlace {
    std::string name;
    TokenCount initial;
};

struct WorkTransition {
    std::string name;
    std::map<std::string, TokenCount> pre;
    std::map<std::string, TokenCount> post;
};

TokenCount weight_of(const std::map<std::string, TokenCount>& arcs, const std::string& p)
{
    auto it = arcs.find(p);
    return it == arcs.end() ? 0 : it->second;
}

class Reducer {
public:
    explicit Reducer(const NetDocument& doc)
    {
        const PetriNet& net = doc.net;
        for (PlaceIndex p = 0; p < net.place_count(); ++p) {
            places_.push_back({net.place_name(p), doc.initial[p]});
            used_.insert(net.place_name(p));
        }
        for (TransitionIndex t = 0; t < net.transition_count(); ++t) {
            WorkTransition wt{net.transition_name(t), {}, {}};
            for (const Arc& a : net.pre(t))
                wt.pre[net.place_name(a.place)] = a.weight;
            for (const Arc& a : net.post(t))
                wt.post[net.place_name(a.place)] = a.weight;
            transitions_.push_back(std::move(wt));
            used_.insert(net.transition_name(t));
        }
    }

    void run()
    {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < places_.size() && !progress; ++i)
                progress = redundant_duplicate(i) || constant_place(i) || chain(i);
        }
        std::erase_if(transitions_, [](const WorkTransition& t) { return t.pre.empty() && t.post.empty(); });
    }

    NetDocument residual(const NetDocument& original) const
    {
        NetDocument out;
        out.name = original.name;
        out.source_format = original.source_format;
        for (const WorkPlace& p : places_) {
            out.net.add_place(p.name);
            out.initial.tokens.push_back(p.initial);
        }
        for (const WorkTransition& wt : transitions_) {
            const TransitionIndex t = out.net.add_transition(wt.name);
            for (const auto& [p, w] : wt.pre)
                out.net.add_input(t, *out.net.find_place(p), w);
            for (const auto& [p, w] : wt.post)
                out.net.add_output(t, *out.net.find_place(p), w);
        }
        return out;
    }

    EquationSystem& equations() { return equations_; }

private:
    bool same_column(const std::string& p, const std::string& q) const
    {
        return std::all_of(transitions_.begin(), transitions_.end(), [&](const WorkTransition& t) {
            return weight_of(t.pre, p) == weight_of(t.pre, q) && weight_of(t.post, p) == weight_of(t.post, q);
        });
    }

    bool redundant_duplicate(std::size_t i)
    {
        const WorkPlace q = places_[i];
        for (std::size_t j = 0; j < i; ++j) {
            const WorkPlace& p = places_[j];
            if (p.initial != q.initial || !same_column(p.name, q.name)) continue;
            equations_.add({EquationTag::Redundancy, Term::node(q.name), {Term::node(p.name)}});
            erase_place(i);
            return true;
        }
        return false;
    }

    bool constant_place(std::size_t i)
    {
        const WorkPlace p = places_[i];
        if (p.initial > 1) return false;
        for (const WorkTransition& t : transitions_)
            if (weight_of(t.pre, p.name) != weight_of(t.post, p.name)) return false;
        std::erase_if(transitions_, [&](const WorkTransition& t) { return weight_of(t.pre, p.name) > p.initial; });
        equations_.add({EquationTag::Redundancy, Term::node(p.name), {Term::literal(p.initial)}});
        erase_place(i);
        return true;
    }

    bool chain(std::size_t i)
    {
        const WorkPlace p = places_[i];
        std::optional<std::size_t> consumer;
        for (std::size_t t = 0; t < transitions_.size(); ++t) {
            if (weight_of(transitions_[t].pre, p.name) == 0) continue;
            if (consumer) return false;
            consumer = t;
        }
        if (!consumer) return false;
        const WorkTransition& t = transitions_[*consumer];
        if (t.pre.size() != 1 || t.pre.begin()->second != 1) return false;
        if (t.post.size() != 1 || t.post.begin()->second != 1) return false;
        const std::string q = t.post.begin()->first;
        if (q == p.name) return false;
        for (std::size_t u = 0; u < transitions_.size(); ++u)
            if (u != *consumer && weight_of(transitions_[u].post, q) != 0) return false;
        auto qi = std::find_if(places_.begin(), places_.end(), [&](const WorkPlace& w) { return w.name == q; });
        if (qi->initial != 0) return false;

        const std::string x = fresh_name();
        transitions_.erase(transitions_.begin() + static_cast<std::ptrdiff_t>(*consumer));
        for (WorkTransition& u : transitions_) {
            for (auto* arcs : {&u.pre, &u.post}) {
                const TokenCount w = weight_of(*arcs, p.name) + weight_of(*arcs, q);
                arcs->erase(p.name);
                arcs->erase(q);
                if (w != 0) (*arcs)[x] = w;
            }
        }
        places_[i] = {x, p.initial};
        std::erase_if(places_, [&](const WorkPlace& w) { return w.name == q; });
        equations_.add({EquationTag::Agglomeration, Term::node(x), {Term::node(p.name), Term::node(q)}});
        return true;
    }

    void erase_place(std::size_t i)
    {
        const std::string name = places_[i].name;
        places_.erase(places_.begin() + static_cast<std::ptrdiff_t>(i));
        for (WorkTransition& t : transitions_) {
            t.pre.erase(name);
            t.post.erase(name);
        }
    }

    std::string fresh_name()
    {
        std::string name;
        do {
            name = "a" + std::to_string(++fresh_);
        } while (used_.count(name));
        used_.insert(name);
        return name;
    }

    std::vector<WorkPlace> places_;
    std::vector<WorkTransition> transitions_;
    std::unordered_set<std::string> used_;
    std::size_t fresh_ = 0;
    EquationSystem equations_;
};

} // namespace

std::vector<std::string> place_names(const NetDocument& doc) { return doc.net.place_names(); }

ReductionResult reduce_net(const NetDocument& doc)
{
    require_marking_of(doc.net, doc.initial);
    Reducer reducer(doc);
    reducer.run();
    ReductionResult result;
    result.original = doc;
    result.residual = reducer.residual(doc);
    result.equations = std::move(reducer.equations());
    result.ratio = reduction_ratio(result.original, result.residual);
    return result;
}

Ratio reduction_ratio(const NetDocument& original, const NetDocument& residual)
{
    Ratio r{0, original.net.place_count()};
    for (const std::string& p : original.net.place_names())
        if (!residual.net.find_place(p)) ++r.removed;
    return r;
}

Ratio reduction_ratio(const ReductionResult& result) { return reduction_ratio(result.original, result.residual); }

} // namespace kong
