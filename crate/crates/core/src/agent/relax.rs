use crate::model::{ActionSchema, PlanningDomain, SortId};

use super::AgentError;

/// Retypes parameter `idx` of `schema` to `new_sort`, which must denote a
/// strict superset of the old sort's objects. The result is named
/// `name~idx` and must still be well-sorted.
pub fn relax_schema(
    domain: &PlanningDomain,
    schema: &ActionSchema,
    idx: usize,
    new_sort: SortId,
) -> Result<ActionSchema, AgentError> {
    let param = schema.params.get(idx).ok_or_else(|| {
        AgentError::Relax(format!(
            "`{}` has {} parameter(s), no index {idx}",
            schema.name,
            schema.params.len()
        ))
    })?;
    if new_sort.index() >= domain.sorts().len() {
        return Err(AgentError::Relax(format!("unknown sort #{}", new_sort.0)));
    }
    let old = param.sort;
    let widens = domain.sort_within(old, new_sort)
        && domain.members(new_sort).len() > domain.members(old).len();
    if !widens {
        return Err(AgentError::Relax(format!(
            "sort `{}` does not widen `{}` for ?{} of `{}`",
            domain.sort(new_sort).name,
            domain.sort(old).name,
            param.name,
            schema.name
        )));
    }
    let mut out = schema.clone();
    out.name = format!("{}~{idx}", schema.name);
    out.params[idx].sort = new_sort;
    domain
        .check_schema(&out)
        .map_err(|e| AgentError::Relax(e.to_string()))?;
    Ok(out)
}
