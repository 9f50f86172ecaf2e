class Welcome {
    String hello = "Hello";
    String who = "World";

    void sayHello() {
        String s = hello;
        s = s + " ";
        s = s + who;
        System.out.println(s);
    }
}
