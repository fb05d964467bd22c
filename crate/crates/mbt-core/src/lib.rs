pub mod biperm;
pub mod dag_reductions;
pub mod fpt;
pub mod graph;
pub mod heapable;
pub mod lp;
pub mod oracle;
pub mod treewidth;
pub mod undirected;
