// gecw: command line front end for the correction toolkit.
//
// Exit codes: 0 on success, 1 for usage problems, 2 when input data fails to
// parse or validate. Options can also come from a key=value config file
// (--config or $GECW_CONFIG); explicit flags win over config values.

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gecw/config.hpp"
#include "gecw/conllu.hpp"
#include "gecw/corpus.hpp"
#include "gecw/labels.hpp"
#include "gecw/m2.hpp"
#include "gecw/ngram_lm.hpp"
#include "gecw/scorer.hpp"
#include "gecw/spellkit.hpp"
#include "gecw/synth.hpp"
#include "gecw/util.hpp"
#include "gecw/wo_detect.hpp"

namespace {

using namespace gecw;

const std::set<std::string> kConfigKeys = {
    "scorer.beta",       "scorer.max_merge_span", "scorer.annotator_selection",
    "spell.model",       "spell.list",            "spell.max_edit_oov",
    "spell.max_edit_vocab", "spell.lambda_distance", "spell.margin",
    "spell.max_length_ratio", "spell.protect",
    "lm.order",          "lm.lambdas",            "lm.map_hapax",
    "synth.profile",     "synth.seed",            "synth.intensity",
    "wo.model",          "wo.threshold",          "wo.min_support",
    "wo.joint",
};

Config load_config(const std::string& path) {
    Config cfg = path.empty() ? Config::from_environment() : Config::load_file(path);
    cfg.restrict_keys(kConfigKeys);
    return cfg;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        write_file(path, content);
}

void print_warnings(const Diagnostics& diag) {
    for (const std::string& w : diag.warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<double> parse_lambda_list(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    for (const std::string& part : split_on(text, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ValidationError("bad interpolation weight '" + part + "'");
        }
    }
    return out;
}

AnnotatorSelection parse_selection(const std::string& name) {
    if (name == "running") return AnnotatorSelection::Running;
    if (name == "local") return AnnotatorSelection::Local;
    throw ValidationError("annotator selection must be 'running' or 'local', not '" + name + "'");
}

// A path that may come from the config file instead of a required flag.
std::string require_path(const CLI::Option* opt, const std::string& flag_value,
                         const Config& cfg, const std::string& key, const char* flag_name) {
    std::string path = opt->count() ? flag_value : cfg.get_string(key, "");
    if (path.empty()) throw CLI::RequiredError(flag_name);
    return path;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estonian grammatical error correction toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gecw 0.1.0");
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (default: $GECW_CONFIG)");

    // score
    auto* score = app.add_subcommand("score", "score corrected text against gold annotations");
    struct {
        std::string gold, hyp, label_map, out, format = "kv", selection = "running";
        double beta = 0.5;
        int span = 4;
        unsigned jobs = 1;
        CLI::Option *beta_opt = nullptr, *span_opt = nullptr, *sel_opt = nullptr;
    } sc;
    score->add_option("--gold", sc.gold, "gold M2 file")->required();
    score->add_option("--hyp", sc.hyp, "corrected text, one sentence per line")->required();
    score->add_option("--label-map", sc.label_map, "corpus-tag to canonical-label map");
    score->add_option("--out", sc.out, "write the report here instead of stdout");
    score->add_option("--format", sc.format, "report format: kv or table")
        ->check(CLI::IsMember({"kv", "table"}))
        ->capture_default_str();
    sc.beta_opt = score->add_option("--beta", sc.beta, "F-score beta used to pick annotators")
                      ->capture_default_str();
    sc.span_opt = score->add_option("--max-merge-span", sc.span,
                                    "widest source span one system edit may cover")
                      ->capture_default_str();
    sc.sel_opt = score->add_option("--annotator-selection", sc.selection,
                                   "running (corpus-greedy) or local (per sentence)")
                     ->check(CLI::IsMember({"running", "local"}))
                     ->capture_default_str();
    score->add_option("--jobs", sc.jobs, "worker threads for the alignment phase")
        ->capture_default_str();
    score->callback([&] {
        Config cfg = load_config(config_path);
        ScorerOptions opt;
        opt.beta = sc.beta_opt->count() ? sc.beta : cfg.get_double("scorer.beta", opt.beta);
        opt.max_merge_span =
            sc.span_opt->count()
                ? sc.span
                : static_cast<int>(cfg.get_int("scorer.max_merge_span", opt.max_merge_span));
        opt.selection = parse_selection(
            sc.sel_opt->count() ? sc.selection
                                : cfg.get_string("scorer.annotator_selection", sc.selection));
        Diagnostics diag;
        LabelMap map;
        if (!sc.label_map.empty()) map = LabelMap::parse(read_file(sc.label_map));
        Corpus gold = parse_m2(read_file(sc.gold), &diag, sc.label_map.empty() ? nullptr : &map);
        print_warnings(diag);
        std::vector<Tokens> hyp = parse_plain(read_file(sc.hyp));
        ScoreReport rep = score_corpus(gold, hyp, opt, sc.jobs);
        emit(sc.out, sc.format == "table" ? format_report_table(rep) : format_report(rep));
    });

    // lm train / spell train
    struct TrainOpts {
        std::string input, model, lambdas;
        int order = 3;
        bool map_hapax = false;
        CLI::Option *order_opt = nullptr, *lambda_opt = nullptr, *hapax_opt = nullptr;
    };
    auto add_train = [&](CLI::App* cmd, TrainOpts& t) {
        cmd->add_option("--input", t.input, "tokenized training text")->required();
        cmd->add_option("--model", t.model, "output model file")->required();
        t.order_opt = cmd->add_option("--order", t.order, "model order")->capture_default_str();
        t.lambda_opt = cmd->add_option("--lambdas", t.lambdas,
                                       "comma-separated interpolation weights");
        t.hapax_opt = cmd->add_flag("--map-hapax", t.map_hapax,
                                    "treat tokens seen once as unknown");
        cmd->callback([&t, &config_path] {
            Config cfg = load_config(config_path);
            int order = t.order_opt->count() ? t.order
                                             : static_cast<int>(cfg.get_int("lm.order", t.order));
            std::string lambdas =
                t.lambda_opt->count() ? t.lambdas : cfg.get_string("lm.lambdas", t.lambdas);
            bool hapax = t.hapax_opt->count() ? t.map_hapax
                                              : cfg.get_bool("lm.map_hapax", t.map_hapax);
            NgramLm lm = NgramLm::train(parse_plain(read_file(t.input)), order,
                                        parse_lambda_list(lambdas), hapax);
            lm.save_file(t.model);
        });
    };
    auto* lm = app.add_subcommand("lm", "n-gram language models");
    lm->require_subcommand(1);
    TrainOpts lmt;
    add_train(lm->add_subcommand("train", "train a model on tokenized text"), lmt);

    auto* lmi = lm->add_subcommand("inspect", "print model summary");
    std::string lmi_model;
    lmi->add_option("--model", lmi_model, "model file")->required();
    lmi->callback([&] {
        NgramLm m = NgramLm::load_file(lmi_model);
        std::string out = "order=" + std::to_string(m.order()) + "\n";
        for (std::size_t k = 0; k < m.lambdas().size(); ++k)
            out += "lambda[" + std::to_string(k + 1) +
                   "]=" + format_fixed4(m.lambdas()[k]) + "\n";
        out += "vocab=" + std::to_string(m.vocab_size()) + "\n";
        out += "tokens=" + std::to_string(m.total_tokens()) + "\n";
        for (int k = 1; k <= m.order(); ++k)
            out += "ngrams[" + std::to_string(k) + "]=" + std::to_string(m.ngram_count(k)) + "\n";
        std::cout << out;
    });

    auto* spell = app.add_subcommand("spell", "statistical spelling correction");
    spell->require_subcommand(1);
    TrainOpts spt;
    add_train(spell->add_subcommand("train", "train the correction language model"), spt);

    auto* correct = spell->add_subcommand("correct", "correct tokenized text");
    struct {
        std::string model, list, input, out, edits;
        unsigned jobs = 1;
        bool no_protect = false;
        SpellPolicy pol;
        CLI::Option *model_opt = nullptr, *list_opt = nullptr, *oov = nullptr, *vocab = nullptr,
                    *lambda = nullptr, *margin = nullptr, *ratio = nullptr, *prot = nullptr;
    } cr;
    cr.model_opt = correct->add_option("--model", cr.model, "language model file");
    cr.list_opt = correct->add_option("--list", cr.list,
                                      "replacement list applied before statistical correction");
    correct->add_option("--in,--input", cr.input, "tokenized text to correct")->required();
    correct->add_option("--out", cr.out, "write corrected text here instead of stdout");
    correct->add_option("--edits", cr.edits, "log applied changes here as M2 edits");
    correct->add_option("--jobs", cr.jobs, "worker threads (output order is input order)")
        ->capture_default_str();
    cr.oov = correct->add_option("--max-edit-oov", cr.pol.max_edit_oov,
                                 "edit budget for unknown tokens")
                 ->capture_default_str();
    cr.vocab = correct->add_option("--max-edit-vocab", cr.pol.max_edit_vocab,
                                   "edit budget for known tokens")
                   ->capture_default_str();
    cr.lambda = correct->add_option("--lambda-distance", cr.pol.lambda_distance,
                                    "log-prob penalty per edit")
                    ->capture_default_str();
    cr.margin = correct->add_option("--margin", cr.pol.margin,
                                    "extra log-prob a known token demands")
                    ->capture_default_str();
    cr.ratio = correct->add_option("--max-length-ratio", cr.pol.max_length_ratio,
                                   "allowed relative length change")
                   ->capture_default_str();
    cr.prot = correct->add_flag("--no-protect", cr.no_protect,
                                "also touch digits, acronyms and capitalized tokens");
    correct->callback([&] {
        Config cfg = load_config(config_path);
        SpellPolicy pol = cr.pol;
        if (!cr.oov->count())
            pol.max_edit_oov = static_cast<int>(cfg.get_int("spell.max_edit_oov", pol.max_edit_oov));
        if (!cr.vocab->count())
            pol.max_edit_vocab =
                static_cast<int>(cfg.get_int("spell.max_edit_vocab", pol.max_edit_vocab));
        if (!cr.lambda->count())
            pol.lambda_distance = cfg.get_double("spell.lambda_distance", pol.lambda_distance);
        if (!cr.margin->count()) pol.margin = cfg.get_double("spell.margin", pol.margin);
        if (!cr.ratio->count())
            pol.max_length_ratio = cfg.get_double("spell.max_length_ratio", pol.max_length_ratio);
        pol.protect = cr.prot->count() ? !cr.no_protect : cfg.get_bool("spell.protect", true);
        std::string model_path = require_path(cr.model_opt, cr.model, cfg, "spell.model",
                                              "--model");
        std::string list_path = cr.list_opt->count() ? cr.list : cfg.get_string("spell.list", "");

        NgramLm model = NgramLm::load_file(model_path);
        CandidateIndex index(model.vocab_tokens());
        ReplacementList list;
        if (!list_path.empty()) {
            Diagnostics diag;
            list = ReplacementList::load_file(list_path, &diag);
            print_warnings(diag);
        }
        std::vector<Tokens> sentences = parse_plain(read_file(cr.input));
        std::vector<Tokens> corrected(sentences.size());
        Corpus log(cr.edits.empty() ? 0 : sentences.size());
        parallel_for(sentences.size(), cr.jobs, [&](std::size_t i) {
            Tokens pre = list_path.empty() ? sentences[i] : list.apply(sentences[i]);
            corrected[i] = correct_sentence(pre, model, index, pol).tokens;
            if (cr.edits.empty()) return;
            AnnotatedSentence& entry = log[i];
            entry.source = sentences[i];
            entry.annotators = {0};
            auto lattice = extract_edits(sentences[i], corrected[i]);
            for (const SpanEdit& p : score_hypothesis_edits(lattice, {}).proposed) {
                Edit e;
                e.start = p.src_start;
                e.end = p.src_end;
                e.label = ErrorLabel::simple(BaseLabel::Spelling);
                e.correction.assign(corrected[i].begin() + p.hyp_start,
                                    corrected[i].begin() + p.hyp_end);
                log[i].edits.push_back(std::move(e));
            }
        });
        emit(cr.out, serialize_plain(corrected));
        if (!cr.edits.empty()) write_file(cr.edits, serialize_m2(log));
    });

    // replist apply
    auto* replist = app.add_subcommand("replist", "deterministic replacement lists");
    replist->require_subcommand(1);
    auto* rapply = replist->add_subcommand("apply", "apply a replacement list to text");
    struct {
        std::string list, input, out;
    } rl;
    rapply->add_option("--list", rl.list, "wrong<TAB>right list")->required();
    rapply->add_option("--in,--input", rl.input, "tokenized text")->required();
    rapply->add_option("--out", rl.out, "write result here instead of stdout");
    rapply->callback([&] {
        Diagnostics diag;
        ReplacementList list = ReplacementList::load_file(rl.list, &diag);
        print_warnings(diag);
        std::vector<Tokens> sentences = parse_plain(read_file(rl.input));
        for (Tokens& s : sentences) s = list.apply(s);
        emit(rl.out, serialize_plain(sentences));
    });

    // synth
    auto* synth = app.add_subcommand("synth", "synthetic error generation");
    synth->require_subcommand(1);
    auto* sprofile = synth->add_subcommand("profile", "estimate a noise profile from M2");
    struct {
        std::string gold, label_map, out;
    } sp;
    sprofile->add_option("--gold", sp.gold, "annotated corpus")->required();
    sprofile->add_option("--label-map", sp.label_map, "corpus-tag to canonical-label map");
    sprofile->add_option("--out", sp.out, "write the profile here instead of stdout");
    sprofile->callback([&] {
        Diagnostics diag;
        LabelMap map;
        if (!sp.label_map.empty()) map = LabelMap::parse(read_file(sp.label_map));
        Corpus corpus = parse_m2(read_file(sp.gold), &diag, sp.label_map.empty() ? nullptr : &map);
        Diagnostics derive_diag;
        NoiseProfile profile = derive_noise_profile(corpus, &derive_diag);
        print_warnings(diag);
        print_warnings(derive_diag);
        emit(sp.out, profile.serialize());
    });

    auto* sgen = synth->add_subcommand("generate", "noise clean text into an annotated corpus");
    struct {
        std::string input, profile, out, out_text;
        std::uint64_t seed = 1;
        double intensity = 1.0;
        CLI::Option *profile_opt = nullptr, *seed_opt = nullptr, *intensity_opt = nullptr;
    } sg;
    sgen->add_option("--in,--input", sg.input, "clean tokenized text")->required();
    sg.profile_opt = sgen->add_option("--profile", sg.profile, "noise profile");
    sgen->add_option("--out", sg.out, "output M2 (noisy source, restoring edits)")->required();
    sgen->add_option("--out-text", sg.out_text, "also write the noisy text");
    sg.seed_opt = sgen->add_option("--seed", sg.seed, "random seed")->capture_default_str();
    sg.intensity_opt =
        sgen->add_option("--intensity", sg.intensity, "rate multiplier")->capture_default_str();
    sgen->callback([&] {
        Config cfg = load_config(config_path);
        std::uint64_t seed = sg.seed_opt->count()
                                 ? sg.seed
                                 : static_cast<std::uint64_t>(cfg.get_int("synth.seed",
                                                                          static_cast<long long>(sg.seed)));
        double intensity = sg.intensity_opt->count()
                               ? sg.intensity
                               : cfg.get_double("synth.intensity", sg.intensity);
        std::string profile_path = require_path(sg.profile_opt, sg.profile, cfg,
                                                "synth.profile", "--profile");
        NoiseProfile profile = NoiseProfile::load_file(profile_path);
        std::vector<Tokens> clean = parse_plain(read_file(sg.input));
        std::vector<SynthRecord> records = synthesize(clean, profile, seed, intensity);
        write_file(sg.out, write_synth_m2(records, clean));
        if (!sg.out_text.empty()) {
            std::vector<Tokens> noisy;
            for (const SynthRecord& r : records) noisy.push_back(r.noised);
            write_file(sg.out_text, serialize_plain(noisy));
        }
    });

    // wo
    auto* wo = app.add_subcommand("wo", "word-order anomaly detection");
    wo->require_subcommand(1);
    auto* wtrain = wo->add_subcommand("train", "count POS contexts from CoNLL-U");
    struct {
        std::string conllu, out;
        std::uint64_t min_support = 10;
        CLI::Option* sup = nullptr;
    } wt;
    wtrain->add_option("--conllu", wt.conllu, "POS-tagged training data")->required();
    wtrain->add_option("--out", wt.out, "output model file")->required();
    wt.sup = wtrain->add_option("--min-support", wt.min_support,
                                "trigram count needed to judge context")
                 ->capture_default_str();
    wtrain->callback([&] {
        Config cfg = load_config(config_path);
        PosContextModel model = train_pos_model(parse_conllu(read_file(wt.conllu)));
        model.min_support = wt.sup->count()
                                ? wt.min_support
                                : static_cast<std::uint64_t>(cfg.get_int(
                                      "wo.min_support", static_cast<long long>(wt.min_support)));
        model.save_file(wt.out);
    });

    auto* wdetect = wo->add_subcommand("detect", "flag suspicious POS trigrams");
    struct {
        std::string model, conllu, allowlist, out, gold;
        double threshold = 0.05;
        std::uint64_t min_support = 10;
        bool joint = false;
        CLI::Option *model_opt = nullptr, *thr = nullptr, *sup = nullptr, *joint_opt = nullptr;
    } wd;
    wd.model_opt = wdetect->add_option("--model", wd.model, "POS context model");
    wdetect->add_option("--conllu", wd.conllu, "POS-tagged input")->required();
    wdetect->add_option("--allowlist", wd.allowlist,
                        "five-tag contexts never to flag, one per line");
    wdetect->add_option("--out", wd.out, "write flags here instead of stdout");
    wdetect->add_option("--gold", wd.gold, "annotated M2 to evaluate the flags against");
    wd.thr = wdetect->add_option("--threshold", wd.threshold, "context probability cutoff")
                 ->capture_default_str();
    wd.sup = wdetect->add_option("--min-support", wd.min_support,
                                 "override the model's stored support floor");
    wd.joint_opt = wdetect->add_flag("--joint", wd.joint,
                                     "divide by total windows, not the trigram count");
    wdetect->callback([&] {
        Config cfg = load_config(config_path);
        double threshold =
            wd.thr->count() ? wd.threshold : cfg.get_double("wo.threshold", wd.threshold);
        bool joint = wd.joint_opt->count() ? wd.joint : cfg.get_bool("wo.joint", wd.joint);
        std::string model_path = require_path(wd.model_opt, wd.model, cfg, "wo.model",
                                              "--model");
        PosContextModel model = PosContextModel::load_file(model_path);
        if (wd.sup->count())
            model.min_support = wd.min_support;
        else if (cfg.get("wo.min_support"))
            model.min_support = static_cast<std::uint64_t>(
                cfg.get_int("wo.min_support", static_cast<long long>(model.min_support)));
        ContextAllowlist allow;
        if (!wd.allowlist.empty()) allow = ContextAllowlist::load_file(wd.allowlist);
        std::vector<TaggedSentence> input = parse_conllu(read_file(wd.conllu));
        auto flags = detect_corpus(model, input, threshold, joint,
                                   wd.allowlist.empty() ? nullptr : &allow);
        emit(wd.out, serialize_flags(flags));
        if (!wd.gold.empty()) {
            Diagnostics diag;
            Corpus gold = parse_m2(read_file(wd.gold), &diag);
            print_warnings(diag);
            DetectorScore ds = evaluate_detector(flags, gold);
            std::cout << "detector_precision=" << format_fixed4(ds.precision()) << "\n"
                      << "detector_recall=" << format_fixed4(ds.recall()) << "\n"
                      << "detector_f05=" << format_fixed4(ds.f05()) << "\n";
        }
    });

    std::function<void(CLI::App*)> allow_parent_flags = [&](CLI::App* cmd) {
        for (CLI::App* sub : cmd->get_subcommands([](const CLI::App*) { return true; })) {
            sub->fallthrough();
            allow_parent_flags(sub);
        }
    };
    allow_parent_flags(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
