//! Kind rules shared by the static checker and the core operations.

use crate::error::{KindViolation, TypeErrorCode};
use crate::value::{AggKind, Kind, MapFn, Predicate, ZipFn};

/// Two sequences may be compared only if they have exactly the same kind.
pub fn comparable(a: Kind, b: Kind) -> Result<(), KindViolation> {
    match (a, b) {
        _ if a == b => Ok(()),
        (Kind::Token, _) | (_, Kind::Token) => Err(KindViolation::new(
            TypeErrorCode::IllegalCast,
            format!("comparing {a} with {b} needs a cast between token and index kinds"),
        )),
        _ => Err(KindViolation::new(
            TypeErrorCode::CrossFamilyComparison,
            format!("{a} and {b} belong to different index families"),
        )),
    }
}

/// Keys and queries of a selector must be comparable unless the predicate is constant.
pub fn select(keys: Kind, queries: Kind, pred: Predicate) -> Result<(), KindViolation> {
    if pred.is_constant() {
        return Ok(());
    }
    comparable(keys, queries)
}

/// Output kind of aggregating values of kind `v`.
pub fn aggregate(agg: AggKind, v: Kind) -> Result<Kind, KindViolation> {
    match agg {
        AggKind::Mean if v.is_index_like() => Err(KindViolation::new(
            TypeErrorCode::MeanOnIndex,
            format!("mean aggregation over {v} values"),
        )),
        AggKind::Mean => Ok(Kind::Token),
        AggKind::Min | AggKind::Max => Ok(v),
    }
}

/// Output kind of `tok_map(x, f)`.
pub fn map(f: MapFn, x: Kind) -> Result<Kind, KindViolation> {
    match (x, f) {
        (Kind::Token, MapFn::ToIndex) => Err(KindViolation::new(
            TypeErrorCode::IllegalCast,
            "token values cannot be cast to an index",
        )),
        (Kind::Token, _) => Ok(Kind::Token),
        (_, MapFn::Identity) | (_, MapFn::AddConst(1 | -1)) => Ok(x),
        (_, MapFn::Cmp { .. }) => Ok(Kind::Token),
        (Kind::Index, MapFn::ToIndex) => Ok(Kind::Index),
        (_, MapFn::ToToken | MapFn::ToIndex) => Err(KindViolation::new(
            TypeErrorCode::IllegalCast,
            format!("{x} values cannot be cast"),
        )),
        _ => Err(KindViolation::new(
            TypeErrorCode::IndexArithmetic,
            format!("{f:?} is not successor, predecessor or comparison on {x}"),
        )),
    }
}

/// Output kind of `seq_map(x, y, f)`.
pub fn zip(f: ZipFn, x: Kind, y: Kind) -> Result<Kind, KindViolation> {
    match f {
        ZipFn::Gate { .. } | ZipFn::GateNot { .. } => {
            if y.is_index_like() {
                Err(KindViolation::new(
                    TypeErrorCode::IllegalCast,
                    format!("mask condition must be a token boolean, got {y}"),
                ))
            } else {
                Ok(x)
            }
        }
        ZipFn::Cmp(p) if p.is_constant() => Ok(Kind::Token),
        ZipFn::Cmp(_) => comparable(x, y).map(|()| Kind::Token),
        _ if x.is_index_like() || y.is_index_like() => Err(KindViolation::new(
            TypeErrorCode::IndexArithmetic,
            format!("{f:?} applied to {x} and {y}"),
        )),
        _ => Ok(Kind::Token),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::FamilyId;

    const W1: Kind = Kind::Width(FamilyId(1));
    const W2: Kind = Kind::Width(FamilyId(2));

    #[test]
    fn index_allows_successor_and_comparison_only() {
        assert_eq!(map(MapFn::AddConst(1), Kind::Index).unwrap(), Kind::Index);
        assert_eq!(map(MapFn::AddConst(-1), W1).unwrap(), W1);
        let cmp = MapFn::Cmp {
            pred: Predicate::Lt,
            rhs: 3,
        };
        assert_eq!(map(cmp, Kind::Index).unwrap(), Kind::Token);
        for f in [MapFn::AddConst(2), MapFn::MulConst(2), MapFn::DivConst(2), MapFn::Neg] {
            assert_eq!(map(f, Kind::Index).unwrap_err().code, TypeErrorCode::IndexArithmetic);
        }
        assert_eq!(map(MapFn::ToToken, Kind::Index).unwrap_err().code, TypeErrorCode::IllegalCast);
        assert_eq!(map(MapFn::ToIndex, Kind::Token).unwrap_err().code, TypeErrorCode::IllegalCast);
    }

    #[test]
    fn families_do_not_mix() {
        let eq = ZipFn::Cmp(Predicate::Eq);
        assert_eq!(zip(eq, W1, W1).unwrap(), Kind::Token);
        assert_eq!(zip(eq, W1, W2).unwrap_err().code, TypeErrorCode::CrossFamilyComparison);
        assert_eq!(zip(eq, W1, Kind::Index).unwrap_err().code, TypeErrorCode::CrossFamilyComparison);
        assert_eq!(zip(eq, Kind::Token, Kind::Index).unwrap_err().code, TypeErrorCode::IllegalCast);
        assert_eq!(zip(ZipFn::Add, Kind::Index, Kind::Index).unwrap_err().code, TypeErrorCode::IndexArithmetic);
    }

    #[test]
    fn gates_keep_the_kind_of_their_payload() {
        assert_eq!(zip(ZipFn::Gate { fill: 0 }, W1, Kind::Token).unwrap(), W1);
        assert!(zip(ZipFn::Gate { fill: 0 }, Kind::Token, Kind::Index).is_err());
    }

    #[test]
    fn mean_needs_tokens() {
        assert_eq!(aggregate(AggKind::Mean, Kind::Index).unwrap_err().code, TypeErrorCode::MeanOnIndex);
        assert_eq!(aggregate(AggKind::Max, W2).unwrap(), W2);
    }
}
