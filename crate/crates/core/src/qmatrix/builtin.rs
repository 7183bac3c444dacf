//! The shipped derivations, written for general n.

use super::script::{
    CollapseMode, ConstDiagKind, Derivation, DiagKind, ExprSpec, Factor, Move, ScalarFn, WordSpec,
};

fn s(x: impl Into<String>) -> String {
    x.into()
}

fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

fn a(row: &str, col: &str) -> Factor {
    Factor::A {
        row: s(row),
        col: s(col),
    }
}

fn slots(rows: &[String], cols: &[String]) -> Vec<Factor> {
    rows.iter().zip(cols).map(|(r, c)| a(r, c)).collect()
}

fn scalar(f: ScalarFn) -> Factor {
    Factor::Scalar { f }
}

fn det(power: i64) -> Factor {
    Factor::Det { power }
}

fn inv_qfact(n: usize) -> ScalarFn {
    ScalarFn::QFact { m: n }.inverse()
}

/// (−1)^{n−1}/[n−1]!
fn inverse_prefactor(n: usize) -> ScalarFn {
    let sign = if n % 2 == 1 { "1" } else { "-1" };
    ScalarFn::Product {
        factors: vec![ScalarFn::constant(sign), inv_qfact(n - 1)],
    }
}

fn spec(factors: Vec<Factor>, free_rows: Vec<String>, free_cols: Vec<String>) -> ExprSpec {
    ExprSpec {
        factors,
        free_rows,
        free_cols,
    }
}

fn derivation(name: &str, requires: &[&str], provides: &[&str], start: ExprSpec, moves: Vec<Move>, end: ExprSpec) -> Derivation {
    Derivation {
        name: s(name),
        requires: requires.iter().map(|x| s(*x)).collect(),
        provides: provides.iter().map(|x| s(*x)).collect(),
        needs_root: false,
        start,
        moves,
        end,
        end_moves: Vec::new(),
    }
}

/// E_{⟨1..n|}(p)a_1⋯a_n = det(a)ε_{⟨1..n|}
pub fn eps_bra(n: usize) -> Derivation {
    let (r, c) = (names("i", 1..=n), names("x", 1..=n));
    let mut start = vec![Factor::EpsLoDyn { idx: r.clone() }];
    start.extend(slots(&r, &c));
    derivation(
        "eps bra",
        &[],
        &["eps-bra"],
        spec(start, vec![], c.clone()),
        vec![
            Move::IntertwineLr {
                word: WordSpec::Antisym(1, n),
            },
            Move::EpsCollapse {
                mode: CollapseMode::Definition,
                start: 1,
            },
        ],
        spec(vec![det(1), Factor::EpsLo { idx: c.clone() }], vec![], c),
    )
}

/// a_1⋯a_nε^{|1..n⟩} = E^{|1..n⟩}(p)det(a)
pub fn eps_ket(n: usize) -> Derivation {
    let (r, c) = (names("i", 1..=n), names("x", 1..=n));
    let mut start = slots(&r, &c);
    start.push(Factor::EpsUp { idx: c.clone() });
    derivation(
        "eps ket",
        &[],
        &["eps-ket"],
        spec(start, r.clone(), vec![]),
        vec![
            Move::IntertwineRl {
                word: WordSpec::Antisym(1, n),
            },
            Move::EpsCollapse {
                mode: CollapseMode::Definition,
                start: 1,
            },
        ],
        spec(vec![Factor::EpsUpDyn { idx: r.clone() }, det(1)], r, vec![]),
    )
}

/// det(a)h(p) = h(p)det(a), with det(a) written out.
pub fn det_function(n: usize, label: &str, h: ScalarFn) -> Derivation {
    let (r, c) = (names("i", 1..=n), names("x", 1..=n));
    let mut start = vec![scalar(inv_qfact(n)), Factor::EpsLoDyn { idx: r.clone() }];
    start.extend(slots(&r, &c));
    start.push(scalar(h.clone()));
    start.push(Factor::EpsUp { idx: c });
    derivation(
        &format!("det commutes with {label}"),
        &[],
        &[],
        spec(start, vec![], vec![]),
        vec![
            Move::ScalarShift { pending: None },
            Move::EpsCollapse {
                mode: CollapseMode::Definition,
                start: 1,
            },
        ],
        spec(vec![scalar(h), det(1)], vec![], vec![]),
    )
}

/// det(a)a = K(p)aK^{-1}det(a), K^{-1} constant.
pub fn det_commute(n: usize) -> Derivation {
    let (r, c) = (names("i", 1..=n), names("x", 1..=n));
    let mut start = vec![scalar(inv_qfact(n)), Factor::EpsLoDyn { idx: r.clone() }];
    start.extend(slots(&r, &c));
    start.push(a("j", "y"));
    start.push(Factor::EpsUp { idx: c });
    let end = vec![
        Factor::Diag {
            up: s("j"),
            lo: s("m"),
            of: DiagKind::K,
        },
        a("m", "z"),
        Factor::ConstDiag {
            up: s("z"),
            lo: s("y"),
            of: ConstDiagKind::KInv,
        },
        det(1),
    ];
    let word: Vec<i64> = (1..=n as i64).rev().collect();
    derivation(
        "det commutes with a",
        &["eps-ket"],
        &["det-commute"],
        spec(start, vec![s("j")], vec![s("y")]),
        vec![
            Move::IntertwineRl {
                word: WordSpec::Gens(word),
            },
            Move::EpsCollapse {
                mode: CollapseMode::Ket,
                start: 2,
            },
        ],
        spec(end, vec![s("j")], vec![s("y")]),
    )
}

/// (a^{-1})^{α}_{j}: c·det^{-1}E_{⟨2..n+1|}(p)a_2⋯a_nε^{|1..n⟩} with
/// E's last index `lower` and ε's first index `upper`.
fn inverse_factors(n: usize, tag: &str, upper: &str, lower: &str) -> Vec<Factor> {
    let r = names(&format!("{tag}i"), 2..=n);
    let c = names(&format!("{tag}x"), 2..=n);
    let mut e = r.clone();
    e.push(s(lower));
    let mut eps = vec![s(upper)];
    eps.extend(c.iter().cloned());
    let mut out = vec![
        scalar(inverse_prefactor(n)),
        det(-1),
        Factor::EpsLoDyn { idx: e },
    ];
    out.extend(slots(&r, &c));
    out.push(Factor::EpsUp { idx: eps });
    out
}

/// a^{-1}a = N, N constant.
pub fn left_inverse(n: usize) -> Derivation {
    let mut start = inverse_factors(n, "", "u", "j");
    start.push(a("j", "y"));
    derivation(
        "left inverse",
        &["eps-bra"],
        &[],
        spec(start, vec![], vec![s("u"), s("y")]),
        vec![Move::EpsCollapse {
            mode: CollapseMode::Bra,
            start: 1,
        }],
        spec(
            vec![Factor::ConstDiag {
                up: s("u"),
                lo: s("y"),
                of: ConstDiagKind::N,
            }],
            vec![],
            vec![s("u"), s("y")],
        ),
    )
}

/// a a^{-1} = 𝟙
pub fn right_inverse(n: usize) -> Derivation {
    let mut start = vec![a("u", "w")];
    start.extend(inverse_factors(n, "", "w", "v"));
    derivation(
        "right inverse",
        &["eps-ket", "det-commute"],
        &[],
        spec(start, vec![s("u"), s("v")], vec![]),
        vec![
            Move::DetCommute { from: 1, to: 0 },
            Move::ScalarShift { pending: None },
            Move::EpsCollapse {
                mode: CollapseMode::Ket,
                start: 1,
            },
        ],
        spec(
            vec![Factor::Delta {
                up: s("u"),
                lo: s("v"),
            }],
            vec![s("u"), s("v")],
            vec![],
        ),
    )
}

/// U(p)det(a)·a = a·U(p)det(a)
pub fn central(_n: usize) -> Derivation {
    derivation(
        "central element",
        &["det-commute"],
        &[],
        spec(vec![scalar(ScalarFn::U), det(1), a("j", "y")], vec![s("j")], vec![s("y")]),
        vec![Move::DetCommute { from: 0, to: 1 }],
        spec(vec![a("j", "y"), scalar(ScalarFn::U), det(1)], vec![s("j")], vec![s("y")]),
    )
}

/// M^{α}_{β} = (a^{-1}Da)^{α}_{β}
fn m_factors(n: usize, tag: &str, alpha: &str, beta: &str) -> Vec<Factor> {
    let j = format!("{tag}j");
    let k = format!("{tag}k");
    let mut out = inverse_factors(n, tag, alpha, &j);
    out.push(Factor::Diag {
        up: j,
        lo: k.clone(),
        of: DiagKind::D,
    });
    out.push(a(&k, beta));
    out
}

/// [D_2, M_1] = 0
pub fn m_commutes_with_d(n: usize) -> Derivation {
    let d = Factor::Diag {
        up: s("u"),
        lo: s("w"),
        of: DiagKind::D,
    };
    let mut start = m_factors(n, "", "al", "be");
    start.push(d.clone());
    let mut end = vec![d];
    end.extend(m_factors(n, "", "al", "be"));
    let mut out = derivation(
        "M commutes with D",
        &[],
        &[],
        spec(start, vec![s("u"), s("w")], vec![s("al"), s("be")]),
        vec![Move::ScalarShift { pending: None }],
        spec(end, vec![s("u"), s("w")], vec![s("al"), s("be")]),
    );
    out.needs_root = true;
    out
}

fn rinv(up: [&str; 2], lo: [&str; 2]) -> Factor {
    Factor::Rhat {
        up: [s(up[0]), s(up[1])],
        lo: [s(lo[0]), s(lo[1])],
        inverse: true,
    }
}

/// Removes a_s·a^{-1} where the inverse occupies slots s+1..s+n−1 and
/// its det^{-1} sits after slot s.
fn cancel_inverse(s: usize) -> Vec<Move> {
    vec![
        Move::DetCommute { from: s, to: s - 1 },
        Move::ScalarShift { pending: None },
        Move::EpsCollapse {
            mode: CollapseMode::Ket,
            start: s,
        },
    ]
}

fn swap_back() -> Move {
    Move::IntertwineRl {
        word: WordSpec::Gens(vec![-1]),
    }
}

/// a_1M_1a_2 = q^{2/n}a_1a_2R̂^{-1}M_2R̂^{-1}, both sides reduced to
/// D_1a_1a_2. Left-cancelling a_1 gives the exchange relation of M with a.
pub fn m_exchange(n: usize) -> Derivation {
    let mut start = vec![a("u", "a1")];
    start.extend(m_factors(n, "", "a1", "b1"));
    start.push(a("i", "b2"));
    let mut end = vec![a("u", "a1"), scalar(ScalarFn::RootPow { e: 2 }), a("i", "g2"), rinv(["a1", "g2"], ["d1", "d2"])];
    end.extend(m_factors(n, "", "d2", "e2"));
    end.push(rinv(["d1", "e2"], ["b1", "b2"]));
    let rows = vec![s("u"), s("i")];
    let cols = vec![s("b1"), s("b2")];
    let mut end_moves = vec![swap_back()];
    end_moves.extend(cancel_inverse(2));
    end_moves.push(swap_back());
    end_moves.push(Move::ScalarShift { pending: None });
    let mut out = derivation(
        "M exchange with a",
        &["eps-ket", "det-commute"],
        &[],
        spec(start, rows.clone(), cols.clone()),
        cancel_inverse(1),
        spec(end, rows, cols),
    );
    out.end_moves = end_moves;
    out.needs_root = true;
    out
}

/// a_1a_2M_2R̂^{-1}M_2R̂^{-1} = a_1a_2R̂^{-1}M_2R̂^{-1}M_2, both sides
/// reduced to a function of p times a_1a_2.
pub fn reflection(n: usize) -> Derivation {
    let lead = [a("u", "a1"), a("v", "a2")];
    let mut start = lead.to_vec();
    start.extend(m_factors(n, "p", "a2", "c2"));
    start.push(rinv(["a1", "c2"], ["d1", "d2"]));
    start.extend(m_factors(n, "q", "d2", "e2"));
    start.push(rinv(["d1", "e2"], ["b1", "b2"]));
    let mut end = lead.to_vec();
    end.push(rinv(["a1", "a2"], ["c1", "c2"]));
    end.extend(m_factors(n, "p", "c2", "d2"));
    end.push(rinv(["c1", "d2"], ["b1", "e2"]));
    end.extend(m_factors(n, "q", "e2", "b2"));
    let rows = vec![s("u"), s("v")];
    let cols = vec![s("b1"), s("b2")];
    let mut moves = cancel_inverse(2);
    moves.push(swap_back());
    moves.extend(cancel_inverse(2));
    moves.push(swap_back());
    moves.push(Move::ScalarShift { pending: None });
    let mut end_moves = vec![swap_back()];
    end_moves.extend(cancel_inverse(2));
    end_moves.push(swap_back());
    end_moves.extend(cancel_inverse(2));
    end_moves.push(Move::ScalarShift { pending: None });
    let mut out = derivation(
        "reflection equation",
        &["eps-ket", "det-commute"],
        &[],
        spec(start, rows.clone(), cols.clone()),
        moves,
        spec(end, rows, cols),
    );
    out.end_moves = end_moves;
    out.needs_root = true;
    out
}
