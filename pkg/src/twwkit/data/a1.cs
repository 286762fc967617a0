# (e,f) (a,d) (b,e) (a,g) (c,b) (a,b) with a..g = 0..6
4 5
0 3
1 4
0 6
2 1
0 1
