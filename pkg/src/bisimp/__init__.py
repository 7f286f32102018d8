"""Finite simplicial and bisimplicial groups, Moore bicomplexes and Peiffer pairings."""
