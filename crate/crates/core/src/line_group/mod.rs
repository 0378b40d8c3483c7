//! Groups of line homeomorphisms glued from copies of elements of H along a
//! labelling, evaluated exactly on finite windows.

mod analysis;
mod elem;
mod group;
mod transport;
mod word;

pub use analysis::{Atom, AtomReport, ClassEntry, ClassScan, ClassSummary, FixedPoint, ZCertificate};
pub use elem::{Elem, GlueKind, GluedGen, Selection};
pub use group::{half_shift, LineGroup, WindowMap};
pub use transport::{Transport, TransportPhase};
pub use word::{GroupWord, LineGen};
