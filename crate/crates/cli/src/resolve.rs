//! Turning a parsed document into validated algebraic objects.

use std::collections::BTreeMap;

use tracekernel::artin::{Algebra, AlgebraFamily, AlgebraPresentation, Module, ModulePresentation};
use tracekernel::numsgp::{FracIdeal, NumericalSemigroup, Semigroup};
use tracekernel::{FieldSpec, Mat};

use crate::doc::{call, int_list, matrix_rows, scalar, tokens, Block, BlockKind, DocError, Document, Entry};

#[derive(Clone, Debug)]
pub struct NamedModule {
    pub algebra: String,
    pub module: Module,
}

/// Every block of a document, validated.
#[derive(Clone, Debug, Default)]
pub struct Resolved {
    pub algebras: BTreeMap<String, Algebra>,
    pub modules: BTreeMap<String, NamedModule>,
    pub semigroups: BTreeMap<String, Semigroup>,
    pub ideals: BTreeMap<String, FracIdeal>,
    pub tasks: Vec<Block>,
    pub suite: Option<Block>,
    pub doc: Document,
}

struct Resolver<'a> {
    doc: &'a Document,
    out: Resolved,
    stack: Vec<(BlockKind, String)>,
}

pub fn resolve(doc: &Document) -> Result<Resolved, DocError> {
    let mut r = Resolver { doc, out: Resolved { doc: doc.clone(), ..Resolved::default() }, stack: Vec::new() };
    let suites: Vec<&Block> = doc.blocks_of(BlockKind::Suite).collect();
    if suites.len() > 1 {
        return Err(suites[1].error(format!("second suite block (first at line {})", suites[0].line)));
    }
    r.out.suite = suites.first().map(|b| (*b).clone());
    for b in &doc.blocks {
        match b.kind {
            BlockKind::Algebra => {
                r.algebra(&b.name, b.line)?;
            }
            BlockKind::Module => {
                r.named_module(&b.name, b.line)?;
            }
            BlockKind::Semigroup => {
                r.semigroup(&b.name, b.line)?;
            }
            BlockKind::Ideal => {
                r.named_ideal(&b.name, b.line)?;
            }
            BlockKind::Task => {
                if b.value("op").is_none() {
                    return Err(b.error(format!("task {:?} has no op", b.name)));
                }
                r.out.tasks.push(b.clone());
            }
            BlockKind::Suite => {}
        }
    }
    Ok(r.out)
}

fn default_field(doc: &Document) -> Result<FieldSpec, DocError> {
    match doc.global("field") {
        Some(e) => field(e),
        None => Ok(FieldSpec::prime(2).expect("2 is prime")),
    }
}

fn field(e: &Entry) -> Result<FieldSpec, DocError> {
    FieldSpec::parse(&e.value).map_err(|err| DocError::new(e.line, err.to_string()))
}

fn element(f: &FieldSpec, tok: &str, line: usize) -> Result<u32, DocError> {
    f.parse_elem(tok).ok_or_else(|| DocError::new(line, format!("{tok:?} is not an element of {}", f.name())))
}

fn elements(f: &FieldSpec, e: &Entry) -> Result<Vec<u32>, DocError> {
    tokens(&e.value).map(|t| element(f, t, e.line)).collect()
}

pub fn parse_matrix(f: &FieldSpec, e: &Entry, n: usize) -> Result<Mat, DocError> {
    let rows = matrix_rows(&e.value);
    let bad = || DocError::new(e.line, format!("{}: expected a {n}x{n} matrix (rows separated by ';')", e.key));
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad());
    }
    let rows: Vec<Vec<u32>> =
        rows.iter().map(|r| r.iter().map(|t| element(f, t, e.line)).collect()).collect::<Result<_, _>>()?;
    Mat::from_rows(f, &rows).map_err(|_| bad())
}

impl Resolver<'_> {
    fn enter(&mut self, kind: BlockKind, name: &str, line: usize) -> Result<(), DocError> {
        if self.stack.iter().any(|(k, n)| *k == kind && n == name) {
            return Err(DocError::new(line, format!("cyclic reference through {kind} {name:?}")));
        }
        self.stack.push((kind, name.to_string()));
        Ok(())
    }

    fn block(&self, kind: BlockKind, name: &str, line: usize) -> Result<&Block, DocError> {
        self.doc.block(kind, name).ok_or_else(|| DocError::new(line, format!("unresolved {kind} reference {name:?}")))
    }

    fn algebra(&mut self, name: &str, line: usize) -> Result<Algebra, DocError> {
        if let Some(a) = self.out.algebras.get(name) {
            return Ok(a.clone());
        }
        let b = self.block(BlockKind::Algebra, name, line)?.clone();
        let f = match b.get("field") {
            Some(e) => field(e)?,
            None => default_field(self.doc)?,
        };
        let alg = if let Some(e) = b.any(&["family", "fam"]) {
            let fam = AlgebraFamily::parse(&e.value).ok_or_else(|| DocError::new(e.line, format!("unknown family {:?}", e.value)))?;
            AlgebraPresentation::from_family(&f, &fam).map_err(|err| DocError::new(e.line, err.to_string()))?
        } else {
            let constants = b.get("constants").ok_or_else(|| b.error("algebra needs `family` or `constants`"))?;
            let labels: Vec<String> = match b.get("labels") {
                Some(e) => tokens(&e.value).map(String::from).collect(),
                None => {
                    let d = match b.get("dim") {
                        Some(e) => scalar::<usize>(e)?,
                        None => return Err(b.error("algebra needs `labels` or `dim`")),
                    };
                    (0..d).map(|i| format!("e{i}")).collect()
                }
            };
            let d = labels.len();
            let unit = match b.get("unit") {
                Some(e) => elements(&f, e)?,
                None => (0..d).map(|i| u32::from(i == 0)).collect(),
            };
            AlgebraPresentation::new(&f, labels, elements(&f, constants)?, unit)
                .map_err(|err| DocError::new(constants.line, err.to_string()))?
        };
        self.out.algebras.insert(name.to_string(), alg.clone());
        Ok(alg)
    }

    /// The algebra a block refers to: explicit key, else the only one.
    fn algebra_of(&mut self, b: &Block) -> Result<(String, Algebra), DocError> {
        if let Some(e) = b.get("algebra") {
            let a = self.algebra(&e.value, e.line)?;
            return Ok((e.value.clone(), a));
        }
        let all: Vec<&Block> = self.doc.blocks_of(BlockKind::Algebra).collect();
        match all.as_slice() {
            [one] => {
                let name = one.name.clone();
                let a = self.algebra(&name, b.line)?;
                Ok((name, a))
            }
            [] => Err(b.error("no algebra block")),
            _ => Err(b.error("several algebras: name one with `algebra = ...`")),
        }
    }

    fn named_module(&mut self, name: &str, line: usize) -> Result<NamedModule, DocError> {
        if let Some(m) = self.out.modules.get(name) {
            return Ok(m.clone());
        }
        self.enter(BlockKind::Module, name, line)?;
        let b = self.block(BlockKind::Module, name, line)?.clone();
        let (alg_name, alg) = self.algebra_of(&b)?;
        let module = if let Some(e) = b.get("preset") {
            self.module_expr(&alg_name, &alg, &e.value, e.line)?
        } else {
            explicit_module(&alg, &b)?
        };
        self.stack.pop();
        let named = NamedModule { algebra: alg_name, module };
        self.out.modules.insert(name.to_string(), named.clone());
        Ok(named)
    }

    /// A module name or preset expression over `alg`.
    pub fn module_expr(&mut self, alg_name: &str, alg: &Algebra, expr: &str, line: usize) -> Result<Module, DocError> {
        let (head, args) = call(expr).ok_or_else(|| DocError::new(line, format!("malformed expression {expr:?}")))?;
        let arg = |i: usize| -> Result<&str, DocError> {
            args.get(i).copied().ok_or_else(|| DocError::new(line, format!("{head} needs an argument")))
        };
        let err = |e: tracekernel::error::ModuleError| DocError::new(line, e.to_string());
        Ok(match head {
            "R" if args.is_empty() => ModulePresentation::free(alg, 1),
            "free" => {
                let n: usize = arg(0)?.parse().map_err(|_| DocError::new(line, "free(n) needs an integer"))?;
                ModulePresentation::free(alg, n)
            }
            "k" | "residue_field" => ModulePresentation::residue_field(alg),
            "omega" | "canonical" => ModulePresentation::canonical(alg),
            "m" | "maximal_ideal" => ModulePresentation::maximal_ideal(alg),
            "zero" => ModulePresentation::zero(alg),
            "matlis_dual" => self.module_expr(alg_name, alg, arg(0)?, line)?.matlis_dual(),
            "syzygy" => self.module_expr(alg_name, alg, arg(0)?, line)?.syzygy(),
            "sum" => {
                let parts = args
                    .iter()
                    .map(|a| self.module_expr(alg_name, alg, a, line))
                    .collect::<Result<Vec<_>, _>>()?;
                let refs: Vec<&ModulePresentation> = parts.iter().map(|m| m.as_ref()).collect();
                ModulePresentation::direct_sum(&refs).map_err(err)?
            }
            name if args.is_empty() => {
                let m = self.named_module(name, line)?;
                if m.algebra != alg_name {
                    return Err(DocError::new(line, format!("module {name:?} is over {}, not {alg_name}", m.algebra)));
                }
                m.module
            }
            _ => return Err(DocError::new(line, format!("unknown module preset {head:?}"))),
        })
    }

    fn semigroup(&mut self, name: &str, line: usize) -> Result<Semigroup, DocError> {
        if let Some(s) = self.out.semigroups.get(name) {
            return Ok(s.clone());
        }
        let b = self.block(BlockKind::Semigroup, name, line)?.clone();
        let e = b.any(&["gens", "generators"]).ok_or_else(|| b.error("semigroup needs `gens`"))?;
        let s = gens(e)?;
        self.out.semigroups.insert(name.to_string(), s.clone());
        Ok(s)
    }

    /// Semigroup of a block: `semigroup = S`, inline `gens`, or the only one.
    fn semigroup_of(&mut self, b: &Block) -> Result<Semigroup, DocError> {
        if let Some(e) = b.any(&["gens", "generators"]) {
            return gens(e);
        }
        if let Some(e) = b.get("semigroup") {
            return self.semigroup(&e.value, e.line);
        }
        let all: Vec<&Block> = self.doc.blocks_of(BlockKind::Semigroup).collect();
        match all.as_slice() {
            [one] => {
                let name = one.name.clone();
                self.semigroup(&name, b.line)
            }
            [] => Err(b.error("no semigroup: add `gens = ...` or a semigroup block")),
            _ => Err(b.error("several semigroups: name one with `semigroup = ...`")),
        }
    }

    fn named_ideal(&mut self, name: &str, line: usize) -> Result<FracIdeal, DocError> {
        if let Some(i) = self.out.ideals.get(name) {
            return Ok(i.clone());
        }
        self.enter(BlockKind::Ideal, name, line)?;
        let b = self.block(BlockKind::Ideal, name, line)?.clone();
        let s = self.semigroup_of(&b)?;
        let ideal = if let Some(e) = b.get("preset") {
            self.ideal_expr(&s, &e.value, e.line)?
        } else if let Some(e) = b.get("generated_by") {
            let g: Vec<i64> = int_list(e)?;
            let lo = *g.iter().min().ok_or_else(|| DocError::new(e.line, "generated_by needs at least one value"))?;
            let tail = lo + s.conductor();
            let values: Vec<i64> = (lo..tail).filter(|&z| g.iter().any(|&a| s.contains(z - a))).collect();
            FracIdeal::new(&s, &values, tail).map_err(|err| DocError::new(e.line, err.to_string()))?
        } else {
            let e = b.get("values").ok_or_else(|| b.error("ideal needs `preset`, `generated_by` or `values`"))?;
            let values: Vec<i64> = int_list(e)?;
            let tail = match b.get("tail") {
                Some(t) => scalar(t)?,
                None => values.iter().max().copied().unwrap_or(0) + s.conductor(),
            };
            FracIdeal::new(&s, &values, tail).map_err(|err| DocError::new(e.line, err.to_string()))?
        };
        self.stack.pop();
        self.out.ideals.insert(name.to_string(), ideal.clone());
        Ok(ideal)
    }

    pub fn ideal_expr(&mut self, s: &Semigroup, expr: &str, line: usize) -> Result<FracIdeal, DocError> {
        let (head, args) = call(expr).ok_or_else(|| DocError::new(line, format!("malformed expression {expr:?}")))?;
        let arg = |i: usize| -> Result<&str, DocError> {
            args.get(i).copied().ok_or_else(|| DocError::new(line, format!("{head} needs {} arguments", i + 1)))
        };
        let int = |t: &str| -> Result<i64, DocError> { t.parse().map_err(|_| DocError::new(line, format!("bad integer {t:?}"))) };
        let err = |e: tracekernel::error::SemigroupError| DocError::new(line, e.to_string());
        let i = match head {
            "R" if args.is_empty() => FracIdeal::ring(s),
            "omega" | "K" | "canonical" if args.is_empty() => FracIdeal::canonical(s),
            "m" | "maximal_ideal" if args.is_empty() => FracIdeal::maximal_ideal(s),
            "principal" => FracIdeal::principal(s, int(arg(0)?)?),
            "colon" => {
                let a = self.ideal_expr(s, arg(0)?, line)?;
                let b = self.ideal_expr(s, arg(1)?, line)?;
                a.colon(&b).map_err(err)?
            }
            "product" => {
                let a = self.ideal_expr(s, arg(0)?, line)?;
                let b = self.ideal_expr(s, arg(1)?, line)?;
                a.product(&b).map_err(err)?
            }
            "translate" => self.ideal_expr(s, arg(0)?, line)?.translate(int(arg(1)?)?),
            "star" => self.ideal_expr(s, arg(0)?, line)?.star(),
            "vee" => self.ideal_expr(s, arg(0)?, line)?.vee(),
            "trace" => self.ideal_expr(s, arg(0)?, line)?.trace_ideal(),
            "trace_omega" => self.ideal_expr(s, arg(0)?, line)?.trace_omega(),
            name if args.is_empty() => {
                let i = self.named_ideal(name, line)?;
                if i.parent().generators() != s.generators() {
                    return Err(DocError::new(line, format!("ideal {name:?} belongs to {}, not {s}", i.parent())));
                }
                i
            }
            _ => return Err(DocError::new(line, format!("unknown ideal preset {head:?}"))),
        };
        Ok(i)
    }
}

fn gens(e: &Entry) -> Result<Semigroup, DocError> {
    let g: Vec<u64> = int_list(e)?;
    NumericalSemigroup::new(&g).map_err(|err| DocError::new(e.line, err.to_string()))
}

/// `dim = n` and `action.<label> = rows` (or `action[<index>]`); every basis element, or
/// enough algebra generators to derive the rest.
fn explicit_module(alg: &Algebra, b: &Block) -> Result<Module, DocError> {
    let f = alg.field();
    let dim: usize = scalar(b.get("dim").ok_or_else(|| b.error("module needs `preset` or `dim`"))?)?;
    let mut given: Vec<(usize, Mat)> = Vec::new();
    for e in b.entries.iter().filter(|e| e.key.starts_with("action")) {
        let idx = if let Some(label) = e.key.strip_prefix("action.") {
            alg.labels().iter().position(|l| l == label)
        } else {
            let i = e.key.strip_prefix("action[").and_then(|r| r.strip_suffix(']'));
            i.and_then(|i| i.parse::<usize>().ok()).filter(|&i| i < alg.dim())
        };
        let idx = idx.ok_or_else(|| DocError::new(e.line, format!("{:?} names no basis label or index", e.key)))?;
        if given.iter().any(|(i, _)| *i == idx) {
            return Err(DocError::new(e.line, format!("second action for basis element {idx} ({})", e.key)));
        }
        given.push((idx, parse_matrix(f, e, dim)?));
    }
    given.sort_by_key(|(i, _)| *i);
    let err = |e: tracekernel::error::ModuleError| b.error(e.to_string());
    if given.len() == alg.dim() {
        ModulePresentation::new(alg, dim, given.into_iter().map(|(_, m)| m).collect()).map_err(err)
    } else {
        let partial: Vec<(Vec<u32>, Mat)> = given
            .into_iter()
            .map(|(i, m)| {
                let mut x = vec![0; alg.dim()];
                x[i] = 1;
                (x, m)
            })
            .collect();
        ModulePresentation::from_partial_actions(alg, dim, &partial).map_err(err)
    }
}

/// Module and ideal expressions used by tasks, resolved against a finished
/// document.
pub struct Scope<'a> {
    inner: Resolver<'a>,
}

impl<'a> Scope<'a> {
    pub fn new(resolved: &'a Resolved) -> Self {
        Scope { inner: Resolver { doc: &resolved.doc, out: resolved.clone(), stack: Vec::new() } }
    }

    /// The algebra of a task: `algebra = ...`, else that of the first named
    /// module among `keys`, else the only one.
    pub fn task_algebra(&mut self, task: &Block, keys: &[&str]) -> Result<(String, Algebra), DocError> {
        if task.get("algebra").is_none() {
            for k in keys {
                if let Some(e) = task.get(k) {
                    if let Some(m) = self.inner.out.modules.get(&e.value) {
                        let name = m.algebra.clone();
                        return Ok((name.clone(), self.inner.out.algebras[&name].clone()));
                    }
                }
            }
        }
        self.inner.algebra_of(task)
    }

    pub fn module(&mut self, alg: &(String, Algebra), e: &Entry) -> Result<Module, DocError> {
        self.inner.module_expr(&alg.0, &alg.1, &e.value, e.line)
    }

    pub fn semigroup(&mut self, task: &Block) -> Result<Semigroup, DocError> {
        self.inner.semigroup_of(task)
    }

    /// Semigroup of a task, falling back to that of a named ideal among `keys`.
    pub fn task_semigroup(&mut self, task: &Block, keys: &[&str]) -> Result<Semigroup, DocError> {
        if task.any(&["gens", "generators", "semigroup"]).is_none() {
            for k in keys {
                if let Some(e) = task.get(k) {
                    if let Some(i) = self.inner.out.ideals.get(&e.value) {
                        return Ok(i.parent().clone());
                    }
                }
            }
        }
        self.inner.semigroup_of(task)
    }

    pub fn ideal(&mut self, s: &Semigroup, e: &Entry) -> Result<FracIdeal, DocError> {
        self.inner.ideal_expr(s, &e.value, e.line)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::parse;

    #[test]
    fn presets_and_explicit_modules() {
        let doc = parse(
            "field = F2\nalgebra A fam=dual_numbers\n[module M]\npreset = sum(R, k)\n\
             [module K2]\ndim = 1\naction.x = 0\n[module W]\npreset = matlis_dual(M)\n",
        )
        .unwrap();
        let r = resolve(&doc).unwrap();
        assert_eq!(r.modules["M"].module.dim(), 3);
        assert_eq!(r.modules["K2"].module.dim(), 1);
        assert_eq!(r.modules["W"].module.dim(), 3);
    }

    #[test]
    fn semigroup_blocks() {
        let doc = parse("semigroup S gens=3,4,5\n[ideal I]\npreset = colon(R, omega)\n[ideal J]\ngenerated_by = 0, 2\n[ideal J2]\nvalues = 0, 2, 3, 4\ntail = 5\n").unwrap();
        let r = resolve(&doc).unwrap();
        assert_eq!(r.semigroups["S"].frobenius(), 2);
        assert_eq!(r.ideals["I"], FracIdeal::maximal_ideal(&r.semigroups["S"]));
        assert_eq!(r.ideals["J"].generators(), vec![0, 2]);
        assert_eq!(r.ideals["J"], r.ideals["J2"]);
        let bad = parse("semigroup S gens=3,4,5\n[ideal J]\nvalues = 0, 2\n").unwrap();
        assert_eq!(resolve(&bad).unwrap_err().line, 3);
    }

    #[test]
    fn resolution_errors_have_lines() {
        let doc = parse("algebra A fam=dual_numbers\n[module M]\npreset = syzygy(N)\n").unwrap();
        let e = resolve(&doc).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("unresolved"), "{e}");
        let doc = parse("algebra A fam=dual_numbers\n[module M]\npreset = syzygy(M)\n").unwrap();
        assert!(resolve(&doc).unwrap_err().message.contains("cyclic"));
        let doc = parse("algebra A fam=dual_numbers\n[module M]\ndim = 1\naction.x = 1\n").unwrap();
        assert_eq!(resolve(&doc).unwrap_err().line, 2);
        let doc = parse("semigroup S gens=4,6\n").unwrap();
        assert_eq!(resolve(&doc).unwrap_err().line, 1);
    }
}
