use serde::{Deserialize, Serialize};

use super::word::{letter_generator, GroupPresentation, Word};

/// Outcome of a coset enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationStatus {
    Complete,
    /// The live-coset budget ran out before the table closed. The subgroup
    /// may still have finite index; nothing is claimed.
    BudgetExceeded,
}

/// Standardized coset table for a subgroup `H` of `G = <X | R>`.
///
/// Coset 0 is `H`; cosets are numbered in breadth-first order of their
/// shortest representatives, scanning letters `g_0, g_0^-1, g_1, ...`.
/// Cosets are right cosets `H w` and the table records `H w -> H w g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    presentation: GroupPresentation,
    subgroup: Vec<Word>,
    status: EnumerationStatus,
    coset_count: usize,
    /// `action[2g][c]` is `c·g`, `action[2g+1][c]` is `c·g^-1`.
    action: Vec<Vec<usize>>,
    representatives: Vec<Word>,
}

impl CosetTable {
    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn subgroup(&self) -> &[Word] {
        &self.subgroup
    }

    pub fn status(&self) -> EnumerationStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == EnumerationStatus::Complete
    }

    /// Index of the subgroup (number of live cosets when the budget ran out).
    pub fn coset_count(&self) -> usize {
        self.coset_count
    }

    /// Whether the table was built for the trivial subgroup.
    pub fn is_trivial_subgroup(&self) -> bool {
        self.subgroup.iter().all(Word::is_empty)
    }

    /// `c·letter`. Only meaningful on complete tables.
    pub fn act_letter(&self, coset: usize, letter: i32) -> usize {
        let col = letter_column(letter);
        self.action[col][coset]
    }

    pub fn act(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act_letter(c, l))
    }

    /// Permutation `c -> c·g` of generator `g`.
    pub fn generator_permutation(&self, g: usize) -> &[usize] {
        &self.action[2 * g]
    }

    /// Shortest representative word of each coset (in the BFS order above).
    pub fn representatives(&self) -> &[Word] {
        &self.representatives
    }
}

fn letter_column(letter: i32) -> usize {
    2 * letter_generator(letter) + usize::from(letter < 0)
}

fn column_letter(col: usize) -> i32 {
    let g = (col / 2) as i32 + 1;
    if col % 2 == 0 {
        g
    } else {
        -g
    }
}

const UNDEF: usize = usize::MAX;

/// Felsch-free HLT enumeration with coincidence processing.
struct Enumerator {
    ncols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    live: usize,
    max_live: usize,
    max_rows: usize,
    overflow: bool,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(ncols: usize, max_live: usize) -> Self {
        let mut e = Enumerator {
            ncols,
            table: Vec::new(),
            parent: Vec::new(),
            live: 0,
            max_live,
            max_rows: max_live.saturating_mul(8).max(256),
            overflow: false,
            queue: Vec::new(),
        };
        e.new_row();
        e
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn new_row(&mut self) -> usize {
        let r = self.rows();
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.parent.push(r);
        self.live += 1;
        r
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.ncols + x]
    }

    fn set(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.ncols + x] = v;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.live >= self.max_live || self.rows() >= self.max_rows {
            self.overflow = true;
            return false;
        }
        let n = self.new_row();
        self.set(c, x, n);
        self.set(n, x ^ 1, c);
        true
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.live -= 1;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.get(mu, x) != UNDEF {
                    let t = self.get(mu, x);
                    self.merge(nu, t);
                } else if self.get(nu, x ^ 1) != UNDEF {
                    let t = self.get(nu, x ^ 1);
                    self.merge(mu, t);
                } else {
                    self.set(mu, x, nu);
                    self.set(nu, x ^ 1, mu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: usize, w: &[usize]) {
        if w.is_empty() {
            return;
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = w.len(); // exclusive end of the unscanned middle
        loop {
            while i < j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j > i && self.get(b, w[j - 1] ^ 1) != UNDEF {
                b = self.get(b, w[j - 1] ^ 1);
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return;
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return;
            }
            if !self.define(f, w[i]) {
                return;
            }
        }
    }
}

/// Enumerates the cosets of `<subgroup>` in the presented group, giving up
/// once more than `max_cosets` cosets are alive at once.
pub fn todd_coxeter(presentation: &GroupPresentation, subgroup: &[Word], max_cosets: usize) -> CosetTable {
    let ncols = 2 * presentation.generator_count();
    let to_cols = |w: &Word| -> Vec<usize> { w.letters().iter().map(|&l| letter_column(l)).collect() };
    let relators: Vec<Vec<usize>> = presentation.relators().iter().map(to_cols).collect();
    let mut e = Enumerator::new(ncols, max_cosets.max(1));

    for w in subgroup {
        e.scan_and_fill(0, &to_cols(w));
    }
    let mut c = 0;
    while c < e.rows() && !e.overflow {
        for r in &relators {
            if !e.is_live(c) || e.overflow {
                break;
            }
            e.scan_and_fill(c, r);
        }
        for x in 0..ncols {
            if !e.is_live(c) || e.overflow {
                break;
            }
            if e.get(c, x) == UNDEF {
                e.define(c, x);
            }
        }
        c += 1;
    }

    let base = CosetTable {
        presentation: presentation.clone(),
        subgroup: subgroup.to_vec(),
        status: EnumerationStatus::BudgetExceeded,
        coset_count: e.live,
        action: Vec::new(),
        representatives: Vec::new(),
    };
    if e.overflow {
        return base;
    }
    standardize(e, base)
}

fn standardize(e: Enumerator, mut out: CosetTable) -> CosetTable {
    let mut number = vec![UNDEF; e.rows()];
    let mut order = vec![0usize];
    let mut representatives = vec![Word::empty()];
    number[0] = 0;
    let mut k = 0;
    while k < order.len() {
        let c = order[k];
        for x in 0..e.ncols {
            let d = e.get(c, x);
            if number[d] == UNDEF {
                number[d] = order.len();
                order.push(d);
                representatives.push(representatives[k].concat(&Word::new(vec![column_letter(x)]).expect("nonzero")));
            }
        }
        k += 1;
    }
    out.action = (0..e.ncols).map(|x| order.iter().map(|&c| number[e.get(c, x)]).collect()).collect();
    out.coset_count = order.len();
    out.representatives = representatives;
    out.status = EnumerationStatus::Complete;
    out
}

/// Order of a presented group, when enumeration over the trivial subgroup
/// closes within the budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(usize, CosetTable),
    Unknown,
}

pub fn group_order(presentation: &GroupPresentation, max_cosets: usize) -> GroupOrder {
    let table = todd_coxeter(presentation, &[], max_cosets);
    if table.is_complete() {
        GroupOrder::Finite(table.coset_count(), table)
    } else {
        GroupOrder::Unknown
    }
}
