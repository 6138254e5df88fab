class DenseSpacing{int f(int a,int b){return a+b;}int g(){int x=1;x+=f(x,x);return x;}}