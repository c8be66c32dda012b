//! Worked examples with their expected facts, run by `verify-paper`.
//!
//! Each fact pairs an expected value (as stated for the example) with the
//! value computed by the library; a row passes when every fact matches.

use hullcode::constructions::{
    construction1_extend, construction1_search, corollary_lcd_to_one, sum_hull_predict, theorem31_construct,
    Frame, DEFAULT_TRIALS,
};
use hullcode::{Felt, Field, LinearCode, MatGF, ScalingVector, DEFAULT_BUDGET};

use crate::format::parse_code_file;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Fact {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone)]
pub struct ExampleResult {
    pub id: &'static str,
    pub title: &'static str,
    pub facts: Vec<Fact>,
}

impl ExampleResult {
    pub fn passed(&self) -> bool {
        self.facts.iter().all(Fact::holds)
    }
}

pub struct Example {
    pub id: &'static str,
    pub title: &'static str,
    run: fn(&mut Facts),
}

impl Example {
    pub fn run(&self) -> ExampleResult {
        let mut facts = Facts(Vec::new());
        (self.run)(&mut facts);
        ExampleResult { id: self.id, title: self.title, facts: facts.0 }
    }
}

pub struct Facts(Vec<Fact>);

impl Facts {
    fn expect(&mut self, name: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) {
        self.0.push(Fact { name: name.into(), expected: expected.into(), actual: actual.into() });
    }
}

pub const EX_3_1: &str = include_str!("../data/ex-3.1.code");
pub const EX_4_1: &str = include_str!("../data/ex-4.1.code");
pub const EX_4_2: &str = include_str!("../data/ex-4.2.code");
pub const EX_4_2_LAMBDA: &str = include_str!("../data/ex-4.2-lambda.code");
pub const CON1_GF4: &str = include_str!("../data/con1-gf4.code");
pub const CON1_GF8: [&str; 3] = [
    include_str!("../data/con1-gf8-k1.code"),
    include_str!("../data/con1-gf8-k3.code"),
    include_str!("../data/con1-gf8-k5.code"),
];
pub const EX_5_1: [&str; 2] = [include_str!("../data/ex-5.1-c1.code"), include_str!("../data/ex-5.1-c2.code")];
pub const EX_5_2: [&str; 2] = [include_str!("../data/ex-5.2-c1.code"), include_str!("../data/ex-5.2-c2.code")];
pub const EX_5_3: &str = include_str!("../data/ex-5.3.code");
pub const EX_5_4: &str = include_str!("../data/ex-5.4.code");

/// Prepended rows `(alpha | P)` of the length-extension examples.
pub const CON1_GF4_TOP: &str = "w^2 w 1 0";
pub const CON1_GF8_TOP: &str = "w^5 w^6 w^3 w^4 w w^2 1 0";
pub const CON1_GF16_TOP: &str = "w^10 w^9 1 w^5 w^3 w^8 w w^2 w^7 w^13 w^4 w^14 w^12 w^11 w^6 0";

pub fn load(text: &str) -> LinearCode {
    parse_code_file(text).expect("bundled file parses").code().expect("bundled code is nonzero")
}

/// Generator rows `1, x^(+-1), .., x^(+-s)` over all nonzero elements.
pub fn symmetric_family(f: &Field, s: usize) -> LinearCode {
    let n = f.order() as i64 - 1;
    let mut rows = vec![vec![Felt::ONE; n as usize]];
    for j in 1..=s as i64 {
        rows.push((0..n).map(|i| f.w(i * j)).collect());
        rows.push((0..n).map(|i| f.w(-i * j)).collect());
    }
    LinearCode::new(MatGF::from_rows(f, rows).expect("valid rows")).expect("nonzero")
}

pub fn params(c: &LinearCode) -> String {
    match c.minimum_distance(DEFAULT_BUDGET) {
        Ok(d) => format!("[{},{},{}]", c.n(), c.k(), d),
        Err(e) => format!("[{},{},?] ({e})", c.n(), c.k()),
    }
}

fn mat(m: &MatGF) -> String {
    let f = m.field();
    m.row_iter().map(|r| f.render_row(r)).collect::<Vec<_>>().join("; ")
}

fn split_top(f: &Field, top: &str) -> (Felt, Vec<Felt>) {
    let row = f.parse_row(top).expect("valid row");
    (row[0], row[1..].to_vec())
}

fn ex_3_1(out: &mut Facts) {
    let c = load(EX_3_1);
    let f = c.field().clone();
    out.expect("parameters", "[10,3,7]", params(&c));
    out.expect("LCD", "true", c.is_lcd().to_string());
    let diag = MatGF::diag(&f, &[f.add(Felt::ONE, f.w(3)), f.add(Felt::ONE, f.w(2)), Felt::ONE]);
    out.expect("GG^T", mat(&diag), mat(&c.gram()));
    let stated = ScalingVector::unit(10, 0, f.w(5)).expect("nonzero");
    let scaled = c.scale(&stated).expect("length 10");
    out.expect("hull of C_a for a = (w^5 1 .. 1)", "1", scaled.hull().dim.to_string());
    let actual = match theorem31_construct(&c) {
        Ok(r) => f.render_row(r.scaling.as_ref().expect("scaling").entries()),
        Err(e) => format!("error: {e}"),
    };
    out.expect("thm31 scaling vector", f.render_row(stated.entries()), actual);
}

fn ex_4_1(out: &mut Facts) {
    let c = load(EX_4_1);
    let f = c.field().clone();
    let p = c.generator().submatrix(0..3, 3..6);
    out.expect("PP^T", "1 1 1; 1 1 1; 1 1 1", mat(&p.gram()));
    out.expect("rank(GG^T)", "2", c.gram().rank().to_string());
    out.expect("hull dimension", "1", c.hull().dim.to_string());
    let q = f.order() as u64;
    let oracle = match c.hull_oracle(DEFAULT_BUDGET) {
        Ok(l) => format!("{} of {}", q.pow(l as u32), q.pow(c.k() as u32)),
        Err(e) => format!("error: {e}"),
    };
    out.expect("codewords orthogonal to C", "4 of 64", oracle);
    out.expect("parameters", "[6,3,3]", params(&c));
    out.expect("MDS", "false", c.is_mds(DEFAULT_BUDGET).map(|b| b.to_string()).unwrap_or_default());
}

fn ex_4_2(out: &mut Facts) {
    let c = load(EX_4_2);
    let f = c.field().clone();
    out.expect("parameters", "[4,2,2]", params(&c));
    out.expect("det(GG^T)", f.render(f.add(Felt::ONE, f.w(2))), f.render(c.gram().det().expect("square")));
    let hull = match corollary_lcd_to_one(&c, Frame::Default) {
        Ok(r) => r.verified_hull.to_string(),
        Err(e) => format!("error: {e}"),
    };
    out.expect("corollary output hull", "1", hull);
    let g_lambda = load(EX_4_2_LAMBDA);
    out.expect("hull of G_lambda", "1", g_lambda.hull().dim.to_string());
    let a = ScalingVector::unit(4, 1, f.w(2)).expect("nonzero");
    let lifted = g_lambda.scale(&a).expect("length 4");
    out.expect("hull of G_lambda scaled by (1 w^2 1 1)", "2", lifted.hull().dim.to_string());
}

fn con1_case(out: &mut Facts, label: &str, c: &LinearCode, top: &str, det: &str, ext_params: Option<&str>) {
    let f = c.field().clone();
    let (alpha, p) = split_top(&f, top);
    match construction1_extend(c, alpha, &p) {
        Ok(r) => {
            let ext = r.intermediate.as_ref().expect("extension");
            out.expect(format!("{label}: det(G~G~^T)"), det, f.render(r.scalar("det(G~G~^T)").expect("det")));
            out.expect(format!("{label}: det(G~G~^T) != det(GG^T)"), "true", (r.scalar("det(G~G~^T)") != r.scalar("det(GG^T)")).to_string());
            if let Some(ep) = ext_params {
                out.expect(format!("{label}: extended parameters"), ep, params(ext));
            }
            let witness = ext.scale(r.scaling.as_ref().expect("scaling")).expect("length").hull().dim;
            out.expect(format!("{label}: hull after witness scaling"), "1", witness.to_string());
        }
        Err(e) => out.expect(format!("{label}: construction"), "ok", format!("error: {e}")),
    }
}

fn con1_gf4(out: &mut Facts) {
    let c = load(CON1_GF4);
    out.expect("parameters", "[3,1,3]", params(&c));
    con1_case(out, "[3,1,3]", &c, CON1_GF4_TOP, "w", Some("[4,2,3]"));
}

fn con1_gf8(out: &mut Facts) {
    let stated = [("[7,1,7]", "[8,2,7]"), ("[7,3,5]", "[8,4,4]"), ("[7,5,2]", "[8,6,2]")];
    for (text, (base, ext)) in CON1_GF8.iter().zip(stated) {
        let c = load(text);
        // the third code's distance is not asserted (its minimum distance is 3)
        if c.k() < 5 {
            out.expect(format!("{base}: parameters"), base, params(&c));
        }
        con1_case(out, base, &c, CON1_GF8_TOP, "w^3", Some(ext));
    }
}

fn con1_gf16(out: &mut Facts) {
    let f = Field::gf16();
    let stated = [(0, "[15,1,15]", Some("[16,2,15]")), (1, "[15,3,13]", Some("[16,4,11]"))];
    for (s, base, ext) in stated {
        let c = symmetric_family(&f, s);
        out.expect(format!("{base}: parameters"), base, params(&c));
        con1_case(out, base, &c, CON1_GF16_TOP, "w^5", ext);
    }
    for s in 2..7 {
        let c = symmetric_family(&f, s);
        con1_case(out, &format!("[15,{}]", 2 * s + 1), &c, CON1_GF16_TOP, "w^5", None);
    }
    // the full space k = 15: only the determinant is meaningful
    let full = symmetric_family(&f, 7);
    let (alpha, p) = split_top(&f, CON1_GF16_TOP);
    let mut rows = vec![std::iter::once(alpha).chain(p).collect::<Vec<_>>()];
    for r in full.generator().row_iter() {
        rows.push(std::iter::once(Felt::ZERO).chain(r.iter().copied()).collect());
    }
    let ext = MatGF::from_rows(&f, rows).expect("valid rows");
    out.expect("[15,15]: det(G~G~^T)", "w^5", f.render(ext.gram().det().expect("square")));
}

fn con1_gs(out: &mut Facts) {
    for (f, t) in [(Field::gf8(), 3u32), (Field::gf16(), 4)] {
        let q = f.order();
        for s in 0..(1usize << (t - 1)) {
            let c = symmetric_family(&f, s);
            out.expect(
                format!("GF({q}) s={s}: det(G_sG_s^T)"),
                "1",
                f.render(c.gram().det().expect("square")),
            );
        }
        let searched = if q == 8 { 1..3 } else { 1..2 };
        for s in searched {
            let c = symmetric_family(&f, s);
            let hull = match construction1_search(&c, DEFAULT_TRIALS, 0) {
                Ok((_, _, r)) => r.verified_hull.to_string(),
                Err(e) => format!("error: {e}"),
            };
            out.expect(format!("GF({q}) s={s}: searched extension hull"), "1", hull);
        }
    }
}

fn sum_case(out: &mut Facts, pair: [&str; 2], expect_params: &str, expect_hull: &str) {
    let (c1, c2) = (load(pair[0]), load(pair[1]));
    match sum_hull_predict(&c1, &c2) {
        Ok(r) => {
            out.expect("sum parameters", expect_params, params(&r.output));
            out.expect("sum hull dimension", expect_hull, r.verified_hull.to_string());
        }
        Err(e) => out.expect("sum", "ok", format!("error: {e}")),
    }
}

fn ex_5_1(out: &mut Facts) {
    out.expect("C1 LCD", "true", load(EX_5_1[0]).is_lcd().to_string());
    out.expect("C2 LCD", "true", load(EX_5_1[1]).is_lcd().to_string());
    sum_case(out, EX_5_1, "[4,3,2]", "0");
}

fn ex_5_2(out: &mut Facts) {
    sum_case(out, EX_5_2, "[5,3,2]", "1");
}

fn extend_case(out: &mut Facts, c: &LinearCode, d: &str, expect_params: &str, expect_hull: &str) -> Option<LinearCode> {
    let f = c.field().clone();
    let d = f.parse_row(d).expect("valid row");
    let in_dual = c.generator().row_iter().all(|r| f.dot(r, &d).is_zero());
    out.expect("d in dual", "true", in_dual.to_string());
    out.expect("<d,d>", "1", f.render(f.dot(&d, &d)));
    match c.extend_with_dual_word(&d) {
        Ok(ext) => {
            out.expect("extended parameters", expect_params, params(&ext));
            out.expect("extended hull dimension", expect_hull, ext.hull().dim.to_string());
            Some(ext)
        }
        Err(e) => {
            out.expect("extension", "ok", format!("error: {e}"));
            None
        }
    }
}

fn ex_5_3(out: &mut Facts) {
    let c = load(EX_5_3);
    out.expect("parameters", "[5,2,4]", params(&c));
    out.expect("LCD", "true", c.is_lcd().to_string());
    if let Some(ext) = extend_case(out, &c, "0 0 1 w^5 w^5", "[6,3,3]", "1") {
        let listed = LinearCode::parse(c.field(), "1 0 0 1 w^5 w^5; 0 1 0 w w^4 w^6; 0 0 1 w^4 w w^5").expect("valid");
        out.expect("same code as listed generator", "true", ext.same_code(&listed).to_string());
    }
}

fn ex_5_4(out: &mut Facts) {
    let c = load(EX_5_4);
    out.expect("parameters", "[6,4,3]", params(&c));
    out.expect("hull dimension", "1", c.hull().dim.to_string());
    out.expect("MDS", "true", c.is_mds(DEFAULT_BUDGET).map(|b| b.to_string()).unwrap_or_default());
    extend_case(out, &c, "1 0 w^5 w^3 1 w^6", "[7,5,3]", "2");
}

pub fn examples() -> Vec<Example> {
    vec![
        Example { id: "ex-3.1", title: "[10,3,7] LCD code to a one-dimensional hull", run: ex_3_1 },
        Example { id: "ex-4.1", title: "[6,3,3] code with a one-dimensional hull", run: ex_4_1 },
        Example { id: "ex-4.2", title: "[4,2,2] LCD code, corollary and hull increase", run: ex_4_2 },
        Example { id: "con1-gf4", title: "length extension of the [3,1,3] code", run: con1_gf4 },
        Example { id: "con1-gf8", title: "length extensions over GF(8)", run: con1_gf8 },
        Example { id: "con1-gf16", title: "length extensions over GF(16)", run: con1_gf16 },
        Example { id: "con1-gs", title: "symmetric family G_s and searched extensions", run: con1_gs },
        Example { id: "ex-5.1", title: "sum of two LCD codes", run: ex_5_1 },
        Example { id: "ex-5.2", title: "sum with a one-dimensional hull", run: ex_5_2 },
        Example { id: "ex-5.3", title: "dual-word extension of a [5,2,4] LCD code", run: ex_5_3 },
        Example { id: "ex-5.4", title: "dual-word extension of a [6,4,3] MDS code", run: ex_5_4 },
    ]
}

/// Runs all examples, or only `only` when given. `None` if the id is unknown.
pub fn run(only: Option<&str>) -> Option<Vec<ExampleResult>> {
    let all = examples();
    let selected: Vec<&Example> = all.iter().filter(|e| only.is_none_or(|id| e.id == id)).collect();
    if selected.is_empty() {
        return None;
    }
    Some(selected.iter().map(|e| e.run()).collect())
}

/// Pass/fail table; failing facts are listed under their row.
pub fn render(results: &[ExampleResult]) -> String {
    let mut s = String::new();
    for r in results {
        let ok = r.facts.iter().filter(|f| f.holds()).count();
        s.push_str(&format!(
            "{:<4} {:<10} {:>2}/{:<2} {}\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.id,
            ok,
            r.facts.len(),
            r.title
        ));
        for f in r.facts.iter().filter(|f| !f.holds()) {
            s.push_str(&format!("       {}: expected {}, got {}\n", f.name, f.expected, f.actual));
        }
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    s.push_str(&format!("{passed}/{} examples pass\n", results.len()));
    s
}
