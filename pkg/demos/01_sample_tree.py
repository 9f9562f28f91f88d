"""Walk through the 12-vertex sample tree: search trees, rotations, closure and the centroid tree."""

from gstree.core import height, rotate, validate_search_tree
from gstree.fixtures import name, sample_search_tree, sample_topology, swapped, v
from gstree.steiner import centroid_decomposition, first_unclosed_node, reference_tree, steinerify


def show(title, t):
    kids = t.children
    lines = [f"{name(x)} -> {''.join(name(c) for c in kids[x])}" for x in t.order if kids[x]]
    print(f"{title} (root {name(t.root)}, height {height(t)})")
    for ln in lines:
        print("   ", ln)


g = sample_topology()
print("edges:", " ".join(name(a) + name(b) for a, b in g.edges))

t = sample_search_tree()
show("search tree", t)
print("valid:", validate_search_tree(g, t) is None)

# swapping two labels breaks the component condition somewhere below the root
bad = validate_search_tree(g, swapped(t, v("g"), v("j")))
print("after swapping g and j, first bad node:", name(bad.node))

show("after rotating i", rotate(g, t, v("i")))

# the path c, f, i, k, l, j hulls over d with degree 3, so the tree is not closed
print("first node whose root path is not closed:", name(first_unclosed_node(g, t)))
show("closed version", steinerify(g, t))

show("centroid tree", centroid_decomposition(g))
show("reference tree", reference_tree(g))
