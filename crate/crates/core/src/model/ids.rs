use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(ix: usize) -> Self {
                $name(ix as u32)
            }
        }
    };
}

id_type!(
    /// Index of a sort; ids follow name order within a domain.
    SortId
);
id_type!(
    /// Index of an object constant; ids follow name order within a domain.
    ObjId
);
id_type!(
    /// Index of a predicate schema; ids follow name order within a domain.
    PredId
);
id_type!(
    /// Index of an action schema; ids follow name order within a domain.
    SchemaId
);
id_type!(
    /// Interned ground atom. Stable for the lifetime of one loaded world.
    AtomId
);
