//! Fixtures and reference implementations shared by the integration tests.
#![allow(dead_code)]

use byline_bench::corpus::{Corpus, Document, GoldLabel};
use byline_bench::metrics::EditCosts;
use byline_bench::Method;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn test_adapter() -> &'static str {
    env!("CARGO_BIN_EXE_byline-test-adapter")
}

pub fn cli() -> &'static str {
    env!("CARGO_BIN_EXE_byline-bench")
}

// ---------------------------------------------------------------------------
// Reference implementations, written top-down over suffixes so they share
// nothing with the bottom-up prefix tables in the library.

/// Edit distance by recursion on suffixes: a[i..] -> b[j..].
pub fn oracle_edit_distance(a: &[char], b: &[char], costs: EditCosts) -> u64 {
    fn go(a: &[char], b: &[char], i: usize, j: usize, c: EditCosts, memo: &mut [Option<u64>]) -> u64 {
        if i == a.len() {
            return (b.len() - j) as u64 * c.insert as u64;
        }
        if j == b.len() {
            return (a.len() - i) as u64 * c.delete as u64;
        }
        let key = i * (b.len() + 1) + j;
        if let Some(v) = memo[key] {
            return v;
        }
        let keep_or_swap = go(a, b, i + 1, j + 1, c, memo) + if a[i] == b[j] { 0 } else { c.substitute as u64 };
        let delete = go(a, b, i + 1, j, c, memo) + c.delete as u64;
        let insert = go(a, b, i, j + 1, c, memo) + c.insert as u64;
        let v = keep_or_swap.min(delete).min(insert);
        memo[key] = Some(v);
        v
    }
    go(a, b, 0, 0, costs, &mut vec![None; (a.len() + 1) * (b.len() + 1)])
}

pub fn oracle_lcs(a: &[char], b: &[char]) -> usize {
    fn go(a: &[char], b: &[char], i: usize, j: usize, memo: &mut [Option<usize>]) -> usize {
        if i == a.len() || j == b.len() {
            return 0;
        }
        let key = i * (b.len() + 1) + j;
        if let Some(v) = memo[key] {
            return v;
        }
        let v = if a[i] == b[j] {
            1 + go(a, b, i + 1, j + 1, memo)
        } else {
            go(a, b, i + 1, j, memo).max(go(a, b, i, j + 1, memo))
        };
        memo[key] = Some(v);
        v
    }
    go(a, b, 0, 0, &mut vec![None; (a.len() + 1) * (b.len() + 1)])
}

/// Every string over `alphabet` of length 0 through `max_len`.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in alphabet {
                let mut t: Vec<char> = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

const NAME_CHARS: &[char] = &[
    'a', 'b', 'e', 'n', 'o', 'r', 's', 'A', 'J', 'É', 'é', 'ü', 'ø', 'и', 'в', 'α', 'λ', 'ह', 'ن', '王', '李', '.',
    '-', '\'',
];

pub fn random_name(rng: &mut StdRng) -> String {
    let words = rng.gen_range(1..=3);
    (0..words)
        .map(|_| (0..rng.gen_range(1..=6)).map(|_| *NAME_CHARS.choose(rng).unwrap()).collect::<String>())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_author_list(rng: &mut StdRng) -> Vec<String> {
    (0..rng.gen_range(0..=4)).map(|_| random_name(rng)).collect()
}

// ---------------------------------------------------------------------------
// Extraction fixtures.

pub struct Fixture {
    pub id: &'static str,
    pub language: &'static str,
    pub script: &'static str,
    pub html: String,
    pub expected: Vec<&'static str>,
    pub method: Method,
}

fn page(lang: &str, title: &str, head_extra: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html lang=\"{lang}\"><head><meta charset=\"utf-8\"><title>{title}</title>{head_extra}</head>\n\
         <body><nav><a href=\"/\">Home</a> <a href=\"/world\">World</a></nav>\n<article><h1>{title}</h1>\n{body}\n</article>\n\
         <footer><p>&copy; 2023 Example Media</p></footer></body></html>"
    )
}

fn ld(json: &str) -> String {
    format!("<script type=\"application/ld+json\">{json}</script>")
}

struct Lang {
    code: &'static str,
    script: &'static str,
    title: &'static str,
    story: &'static str,
}

const LANGS: [Lang; 10] = [
    Lang { code: "en", script: "Latin", title: "Bridge to reopen", story: "The mayor, Robert Hale, said the bridge would reopen on Monday. Hale added that repairs were on schedule." },
    Lang { code: "fr", script: "Latin", title: "Le pont rouvre", story: "Le maire, Robert Hale, a déclaré que le pont rouvrirait lundi. Selon Hale, les travaux sont terminés." },
    Lang { code: "de", script: "Latin", title: "Brücke öffnet wieder", story: "Bürgermeister Robert Hale sagte, die Brücke werde am Montag wieder geöffnet. Hale lobte die Arbeiter." },
    Lang { code: "es", script: "Latin", title: "Reabre el puente", story: "El alcalde, Robert Hale, dijo que el puente reabrirá el lunes. Hale agradeció a los obreros." },
    Lang { code: "da", script: "Latin", title: "Broen genåbner", story: "Borgmester Robert Hale sagde, at broen genåbner mandag. Hale roste arbejderne." },
    Lang { code: "ru", script: "Cyrillic", title: "Мост откроют", story: "Мэр Роберт Хейл заявил, что мост откроют в понедельник. Хейл поблагодарил рабочих." },
    Lang { code: "el", script: "Greek", title: "Ανοίγει η γέφυρα", story: "Ο δήμαρχος Ρόμπερτ Χέιλ δήλωσε ότι η γέφυρα θα ανοίξει τη Δευτέρα." },
    Lang { code: "hi", script: "Devanagari", title: "पुल फिर खुलेगा", story: "महापौर रॉबर्ट हेल ने कहा कि पुल सोमवार को फिर से खुलेगा।" },
    Lang { code: "ur", script: "Perso-Arabic", title: "پل دوبارہ کھلے گا", story: "میئر رابرٹ ہیل نے کہا کہ پل پیر کو دوبارہ کھلے گا۔" },
    Lang { code: "zh", script: "Han", title: "大桥将重新开放", story: "市长罗伯特·黑尔表示，大桥将于周一重新开放。" },
];

/// (JSON-LD author, meta tag, meta author, third-stage markup, third-stage author, third stage)
type Row = (&'static str, &'static str, &'static str, &'static str, &'static str, Method);

const ROWS: [Row; 10] = [
    ("Jane Doe", "author", "Michael O'Brien", "<p class=\"dateline\">By Sarah-Jane Smith | March 3, 2023</p>", "Sarah-Jane Smith", Method::BylineRegex),
    ("Jean Dupont", "article:author", "Élodie Lefèvre", "<p>Publié le 3 mars. <a rel=\"author\" href=\"/auteurs/mcd\">Marie-Claire Dubois</a></p>", "Marie-Claire Dubois", Method::RelAuthor),
    ("Jürgen Müller", "parsely-author", "Anna Schröder", "<div class=\"meta\"><span class=\"author-name\">Karl Weber</span> <time>3. März 2023</time></div>", "Karl Weber", Method::ClassHeuristic),
    ("María García", "dc.creator", "José Luis Rodríguez", "<p>Por Ana de la Fuente</p>", "Ana de la Fuente", Method::BylineRegex),
    ("Lars Nørgaard", "sailthru.author", "Ida Sørensen", "<p><a rel=\"author\" href=\"/journalister/mo\">Mads Østergaard</a></p>", "Mads Østergaard", Method::RelAuthor),
    ("Иван Петров", "dcterms.creator", "Анна Смирнова", "<p>Автор: Сергей Кузнецов</p>", "Сергей Кузнецов", Method::BylineRegex),
    ("Γιώργος Παπαδόπουλος", "twitter:creator", "Μαρία Κωνσταντίνου", "<div class=\"byline\">Νίκος Γεωργίου</div>", "Νίκος Γεωργίου", Method::ClassHeuristic),
    ("राहुल शर्मा", "author", "प्रिया सिंह", "<p>लेखक: अमित कुमार</p>", "अमित कुमार", Method::BylineRegex),
    ("محمد علی", "article:author", "عائشہ خان", "<span class=\"author\">احمد رضا</span>", "احمد رضا", Method::ClassHeuristic),
    ("王小明", "author", "李华", "<p>记者 张伟</p>", "张伟", Method::BylineRegex),
];

/// JSON-LD shapes rotated across languages.
fn jsonld_block(i: usize, name: &str) -> String {
    match i % 5 {
        0 => ld(&format!(r#"{{"@context":"https://schema.org","@type":"NewsArticle","author":{{"@type":"Person","name":"{name}"}}}}"#)),
        1 => ld(&format!(r#"{{"@context":"https://schema.org","@type":"Article","author":"{name}"}}"#)),
        2 => ld(&format!(
            r#"{{"@context":"https://schema.org","@graph":[{{"@type":"WebSite","name":"Example"}},{{"@type":"NewsArticle","author":[{{"@type":"Person","name":"{name}"}}],"publisher":{{"@type":"Organization","name":"Example Media"}}}}]}}"#
        )),
        3 => ld(&format!(r#"[{{"@type":"BreadcrumbList"}},{{"@type":["BlogPosting"],"author":{{"name":"{name}"}}}}]"#)),
        _ => ld(&format!(r#"{{"@type":"ReportageNewsArticle","author":["{name}"],"headline":"x"}}"#)),
    }
}

/// 30 pages, three per language: one per metadata stage plus one markup or
/// byline page. Each carries exactly one author.
pub fn extraction_fixtures() -> Vec<Fixture> {
    let ids_ld = ["en-ld", "fr-ld", "de-ld", "es-ld", "da-ld", "ru-ld", "el-ld", "hi-ld", "ur-ld", "zh-ld"];
    let ids_meta = ["en-meta", "fr-meta", "de-meta", "es-meta", "da-meta", "ru-meta", "el-meta", "hi-meta", "ur-meta", "zh-meta"];
    let ids_third = ["en-3", "fr-3", "de-3", "es-3", "da-3", "ru-3", "el-3", "hi-3", "ur-3", "zh-3"];
    let mut out = Vec::new();
    for (i, (lang, row)) in LANGS.iter().zip(ROWS.iter()).enumerate() {
        let (ld_name, meta_key, meta_name, third_markup, third_name, third_method) = *row;
        let story = format!("<p>{}</p>", lang.story);
        out.push(Fixture {
            id: ids_ld[i],
            language: lang.code,
            script: lang.script,
            html: page(lang.code, lang.title, &jsonld_block(i, ld_name), &story),
            expected: vec![ld_name],
            method: Method::Jsonld,
        });
        let attr = if meta_key.contains(':') && meta_key != "twitter:creator" { "property" } else { "name" };
        out.push(Fixture {
            id: ids_meta[i],
            language: lang.code,
            script: lang.script,
            html: page(lang.code, lang.title, &format!("<meta {attr}=\"{meta_key}\" content=\"{meta_name}\">"), &story),
            expected: vec![meta_name],
            method: Method::MetaTag,
        });
        out.push(Fixture {
            id: ids_third[i],
            language: lang.code,
            script: lang.script,
            html: page(lang.code, lang.title, "", &format!("{third_markup}\n{story}")),
            expected: vec![third_name],
            method: third_method,
        });
    }
    out
}

/// Pages where two adjacent stages both have an answer; the earlier stage must win.
pub fn precedence_fixtures() -> Vec<(String, Method, &'static str)> {
    let layers: [(String, Method, &str); 5] = [
        (ld(r#"{"@type":"NewsArticle","author":{"name":"Ana Uno"}}"#), Method::Jsonld, "Ana Uno"),
        (r#"<meta name="author" content="Ben Dos">"#.to_string(), Method::MetaTag, "Ben Dos"),
        (r#"<a rel="author" href="/c">Cy Tres</a>"#.to_string(), Method::RelAuthor, "Cy Tres"),
        (r#"<span class="byline">Dee Cuatro</span>"#.to_string(), Method::ClassHeuristic, "Dee Cuatro"),
        ("<p>By Eve Cinco</p>".to_string(), Method::BylineRegex, "Eve Cinco"),
    ];
    let mut out = Vec::new();
    for k in 0..layers.len() - 1 {
        let (a, b) = (&layers[k], &layers[k + 1]);
        // The later stage's markup comes first in the document.
        let html = page("en", "Pair", "", &format!("{}\n{}\n<p>Story text.</p>", b.0, a.0));
        out.push((html, a.1, a.2));
    }
    let all: String = layers.iter().rev().map(|l| l.0.as_str()).collect::<Vec<_>>().join("\n");
    out.push((page("en", "All", "", &all), Method::Jsonld, "Ana Uno"));
    out
}

// ---------------------------------------------------------------------------
// NER cases: the byline name once, a subject five or more times.

pub struct NerCase {
    pub language: &'static str,
    pub html: String,
    pub byline: String,
    pub subject: String,
    /// Names a gazetteer must supply (uncased scripts).
    pub gazetteer: Vec<String>,
}

struct NerLang {
    code: &'static str,
    first: &'static [&'static str],
    last: &'static [&'static str],
    byline: &'static str,
    templates: &'static [&'static str],
    filler: &'static str,
}

const NER_LANGS: [NerLang; 6] = [
    NerLang {
        code: "en",
        first: &["Jane", "Omar", "Lucy", "Peter", "Grace", "Tomas", "Nadia", "Victor"],
        last: &["Doe", "Haddad", "Moreno", "Walsh", "Okafor", "Lindqvist", "Brennan", "Castillo"],
        byline: "By {}",
        templates: &[
            "{} said the plan would go ahead.",
            "Officials met {} on the third day.",
            "The report was praised by {} and others.",
            "Critics of {} remain unconvinced.",
            "{} declined to comment further.",
            "A spokesperson for {} confirmed the figures.",
        ],
        filler: "The weather stayed mild and the markets were calm.",
    },
    NerLang {
        code: "fr",
        first: &["Jean", "Camille", "Hugo", "Léa", "Mathieu", "Chloé"],
        last: &["Dupont", "Lefèvre", "Moreau", "Girard", "Fontaine", "Roux"],
        byline: "Par {}",
        templates: &[
            "{} a affirmé que le projet avancerait.",
            "Les élus ont rencontré {} mardi.",
            "Le rapport a été salué par {} hier soir.",
            "Les critiques de {} restent sceptiques.",
            "{} n'a pas souhaité commenter.",
        ],
        filler: "Le temps est resté doux et les marchés calmes.",
    },
    NerLang {
        code: "de",
        first: &["Anna", "Jonas", "Lena", "Felix", "Miriam", "Stefan"],
        last: &["Schröder", "Becker", "Hoffmann", "Krüger", "Wagner", "Vogel"],
        byline: "Von {}",
        templates: &[
            "{} sagte, der Plan werde umgesetzt.",
            "Beamte trafen {} am dritten Tag.",
            "Der Bericht wurde von {} gelobt.",
            "Kritiker von {} bleiben skeptisch.",
            "{} wollte sich nicht weiter äußern.",
        ],
        filler: "Das Wetter blieb mild und die Märkte ruhig.",
    },
    NerLang {
        code: "es",
        first: &["María", "Javier", "Lucía", "Andrés", "Carmen", "Diego"],
        last: &["García", "Torres", "Navarro", "Ramos", "Iglesias", "Vega"],
        byline: "Por {}",
        templates: &[
            "{} dijo que el plan seguirá adelante.",
            "Los funcionarios se reunieron con {} el martes.",
            "El informe fue elogiado por {} anoche.",
            "Los críticos de {} siguen escépticos.",
            "{} no quiso hacer más comentarios.",
        ],
        filler: "El tiempo siguió templado y los mercados tranquilos.",
    },
    NerLang {
        code: "ru",
        first: &["Иван", "Анна", "Сергей", "Мария", "Олег", "Елена"],
        last: &["Петров", "Смирнова", "Кузнецов", "Волкова", "Соколов", "Морозова"],
        byline: "Автор: {}",
        templates: &[
            "{} заявил, что план будет выполнен.",
            "Чиновники встретились с {} во вторник.",
            "Доклад похвалил {} вчера вечером.",
            "Критики {} остаются скептиками.",
            "{} отказался от комментариев.",
        ],
        filler: "Погода оставалась мягкой, а рынки спокойными.",
    },
    NerLang {
        code: "zh",
        first: &["王", "李", "张", "刘", "陈", "杨"],
        last: &["小明", "华", "伟", "芳", "静", "强"],
        byline: "记者 {}",
        templates: &["{}表示，计划将继续推进。", "官员们周二会见了{}。", "报告受到{}的称赞。", "{}拒绝进一步置评。"],
        filler: "天气依然温和，市场保持平稳。",
    },
];

fn ner_name(lang: &NerLang, rng: &mut StdRng) -> String {
    let first = lang.first.choose(rng).unwrap();
    let last = lang.last.choose(rng).unwrap();
    if lang.code == "zh" {
        format!("{first}{last}")
    } else {
        format!("{first} {last}")
    }
}

/// Deterministic cases for a seed. A third, distracting person appears two
/// to four times; the byline sits at the top or the bottom of the story.
pub fn ner_cases(count: usize, seed: u64) -> Vec<NerCase> {
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let lang = &NER_LANGS[i % NER_LANGS.len()];
            let byline = ner_name(lang, &mut rng);
            let mut subject = ner_name(lang, &mut rng);
            while subject == byline || subject.contains(&byline) || byline.contains(&subject) {
                subject = ner_name(lang, &mut rng);
            }
            let mut other = ner_name(lang, &mut rng);
            while [&byline, &subject].iter().any(|n| n.contains(other.as_str()) || other.contains(n.as_str())) {
                other = ner_name(lang, &mut rng);
            }
            let mut sentences: Vec<String> = Vec::new();
            for _ in 0..rng.gen_range(5..=8) {
                sentences.push(lang.templates.choose(&mut rng).unwrap().replace("{}", &subject));
            }
            for _ in 0..rng.gen_range(2..=4) {
                sentences.push(lang.templates.choose(&mut rng).unwrap().replace("{}", &other));
            }
            sentences.push(lang.filler.to_string());
            sentences.shuffle(&mut rng);
            let paragraphs: String = sentences.iter().map(|s| format!("<p>{s}</p>\n")).collect();
            let byline_line = format!("<p>{}</p>\n", lang.byline.replace("{}", &byline));
            let body = if rng.gen_bool(0.5) {
                format!("{byline_line}{paragraphs}")
            } else {
                format!("{paragraphs}{byline_line}")
            };
            let gazetteer = if lang.code == "zh" { vec![byline.clone(), subject.clone(), other.clone()] } else { Vec::new() };
            NerCase { language: lang.code, html: format!("<html><body><article>{body}</article></body></html>"), byline, subject, gazetteer }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Toy corpora.

/// `n` documents cycling through en, fr and ru, each with a meta author.
pub fn toy_corpus(n: usize) -> Corpus {
    let names = [("en", "Jane Doe"), ("fr", "Jean Dupont"), ("ru", "Иван Петров")];
    let mut docs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        let (lang, name) = names[i % names.len()];
        let author = format!("{name} {}", i + 1);
        let id = format!("doc-{i:02}");
        docs.push(Document {
            id: id.clone(),
            language: lang.parse().unwrap(),
            url: Some(format!("https://news.example/{lang}/{i}")),
            html: format!("<html><head><meta name=\"author\" content=\"{author}\"></head><body><p>Text {i}.</p></body></html>"),
        });
        // Every third document has a second author the extractors never find.
        let mut authors = vec![author];
        if i % 3 == 2 {
            authors.push("Desk Staff".to_string());
        }
        labels.push(GoldLabel { doc_id: id, authors });
    }
    Corpus::new(docs, labels).unwrap()
}

/// A LabelStudio export with a known breakdown:
/// en: 3 converted tasks with 1 + 2 + 0 authors, one skipped task;
/// de: 2 converted tasks with 2 + 1 authors, one flagged task;
/// zh: 1 converted task with 3 authors.
pub fn labelstudio_export() -> String {
    fn span(text: &str) -> String {
        format!(
            r#"{{"type":"hypertextlabels","value":{{"start":"/p[1]","end":"/p[1]","startOffset":0,"endOffset":{len},"text":"{text}","hypertextlabels":["Author"]}},"from_name":"label","to_name":"html"}}"#,
            len = text.chars().count()
        )
    }
    fn task(id: u32, lang: &str, authors: &[&str], cancelled: bool, choice: Option<&str>) -> String {
        let mut result: Vec<String> = authors.iter().map(|a| span(a)).collect();
        if let Some(c) = choice {
            result.push(format!(r#"{{"type":"choices","value":{{"choices":["{c}"]}},"from_name":"flag","to_name":"html"}}"#));
        }
        format!(
            r#"{{"id":{id},"data":{{"html":"<p>{body}</p>","language":"{lang}","url":"https://news.example/{id}"}},"annotations":[{{"id":{ann},"was_cancelled":{cancelled},"result":[{results}]}}]}}"#,
            body = authors.join(", "),
            ann = id * 10,
            results = result.join(",")
        )
    }
    let tasks = [
        task(1, "en", &["Jane Doe"], false, None),
        task(2, "en", &["Omar Haddad", "Lucy Moreno"], false, None),
        task(3, "en", &[], false, None),
        task(4, "en", &["Nobody"], true, None),
        task(5, "de", &["Anna Schröder", "Jonas Becker"], false, None),
        task(6, "de", &["Lena Vogel"], false, None),
        task(7, "de", &["Felix Krüger"], false, Some("Wrong language")),
        task(8, "zh", &["王小明", "李华", "张伟"], false, None),
    ];
    format!("[{}]", tasks.join(","))
}

/// Expected (documents, authors) per language for [`labelstudio_export`].
pub const LABELSTUDIO_COUNTS: [(&str, usize, usize); 3] = [("de", 2, 3), ("en", 3, 3), ("zh", 1, 3)];

/// Published per-language counts of the released dataset: (language, documents, author annotations).
pub const RELEASED_COUNTS: [(&str, usize, usize); 10] = [
    ("da", 30, 54),
    ("de", 99, 91),
    ("el", 32, 23),
    ("en", 94, 99),
    ("es", 30, 24),
    ("fr", 100, 81),
    ("hi", 100, 41),
    ("ru", 94, 125),
    ("ur", 100, 92),
    ("zh", 75, 85),
];

pub const GOLD_CORPUS_ENV: &str = "BYLINE_GOLD_CORPUS";
